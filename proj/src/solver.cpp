#include "acpose/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "acpose/constraints.hpp"
#include "acpose/polyeig.hpp"
#include "acpose/rotations.hpp"

namespace acpose {

namespace {

// One row assignment of the constraint system: which correspondence
// contributes its affine rows.
struct AssignedSystem {
  ConstraintMatrix m;
  DeterminantSystem gs;
};

// Worst normalized determinant value across every assignment built for the
// problem. A true root of the geometry zeroes all of them; a spurious root
// of one 4-row system does not satisfy the swapped system.
double system_residual(std::span<const AssignedSystem> systems, double s,
                       double f_internal) {
  double r = 0.0;
  for (const auto& sys : systems)
    for (const auto& g : sys.gs.g) r = std::max(r, std::abs(eval(g, s, f_internal)));
  return r;
}

// A couple of Gauss-Newton steps on the candidate's own four determinant
// polynomials (they have an exact root there). The eigen-solve already lands
// nearby; this removes the eigenvector conditioning from the final (s, f).
void polish_root(const DeterminantSystem& gs, double& s, double& f_internal) {
  auto own_residual = [&gs](double sv, double fv) {
    double r = 0.0;
    for (const auto& g : gs.g) r = std::max(r, std::abs(eval(g, sv, fv)));
    return r;
  };
  double rs = s, rf = f_internal;
  double best = own_residual(rs, rf);
  for (int it = 0; it < 3 && best > 1e-15; ++it) {
    Eigen::Matrix<double, 4, 2> jac;
    Eigen::Matrix<double, 4, 1> res;
    for (int k = 0; k < 4; ++k) {
      res(k) = eval(gs.g[k], rs, rf);
      jac(k, 0) = eval_ds(gs.g[k], rs, rf);
      jac(k, 1) = eval_df(gs.g[k], rs, rf);
    }
    const Eigen::Matrix2d jtj = jac.transpose() * jac;
    if (std::abs(jtj.determinant()) < 1e-30) break;
    const Eigen::Vector2d step = jtj.ldlt().solve(jac.transpose() * res);
    if (!step.allFinite()) break;
    // Stay inside the basin of the eigenvalue we started from.
    if (step.norm() > 0.05 * (1.0 + std::abs(rs) + std::abs(rf))) break;
    const double ns = rs - step(0), nf = rf - step(1);
    const double r = own_residual(ns, nf);
    if (r >= best) break;
    rs = ns;
    rf = nf;
    best = r;
  }
  s = rs;
  f_internal = rf;
}

struct CheiralityVote {
  int positive = 0;
  int total = 0;
};

CheiralityVote depth_vote(const Pose& pose, double focal_px,
                          const AffineCorrespondence& ac_a, const AffineCorrespondence& ac_b,
                          const Vector2d& pp) {
  CheiralityVote vote;
  for (const auto* ac : {&ac_a, &ac_b}) {
    try {
      const auto [di, dj] = triangulate_depth_signs(pose.R, pose.t, focal_px, *ac, pp);
      ++vote.total;
      if (di > 0.0 && dj > 0.0) ++vote.positive;
    } catch (const DegenerateInput&) {
      // Near-parallel rays contribute no vote.
    }
  }
  return vote;
}

}  // namespace

std::pair<double, double> triangulate_depth_signs(const Matrix3d& R, const Vector3d& t,
                                                  double focal_px,
                                                  const AffineCorrespondence& ac,
                                                  const Vector2d& principal_point) {
  const Vector2d pi = ac.x_i - principal_point;
  const Vector2d pj = ac.x_j - principal_point;
  const Vector3d v_i = Vector3d(pi.x() / focal_px, pi.y() / focal_px, 1.0).normalized();
  const Vector3d v_j = Vector3d(pj.x() / focal_px, pj.y() / focal_px, 1.0).normalized();

  // View-j ray expressed in the view-i frame.
  const Vector3d c_j = -R.transpose() * t;
  const Vector3d d_j = R.transpose() * v_j;
  const double cross_norm = v_i.cross(d_j).norm();
  if (std::atan2(cross_norm, std::abs(v_i.dot(d_j))) < 1e-6)
    throw DegenerateInput("triangulation rays are near-parallel");

  // Midpoint of the closest points on the two rays.
  const double a11 = v_i.dot(v_i), a12 = -v_i.dot(d_j), a22 = d_j.dot(d_j);
  const double b1 = v_i.dot(c_j), b2 = -d_j.dot(c_j);
  const double det = a11 * a22 - a12 * a12;
  const double alpha = (a22 * b1 - a12 * b2) / det;
  const double beta = (a11 * b2 - a12 * b1) / det;
  const Vector3d mid = 0.5 * (alpha * v_i + (c_j + beta * d_j));
  return {mid.z(), (R * mid + t).z()};
}

std::vector<SolutionCandidate> solve_2ac(const AffineCorrespondence& ac_a,
                                         const AffineCorrespondence& ac_b,
                                         const ImuAttitude& imu_i, const ImuAttitude& imu_j,
                                         const Vector2d& principal_point,
                                         const SolveOptions& opts) {
  if ((ac_a.x_i - ac_b.x_i).norm() < 1e-9 || (ac_a.x_j - ac_b.x_j).norm() < 1e-9)
    throw DegenerateInput("the two correspondences coincide");

  std::vector<SolutionCandidate> candidates;
  bool degenerate_seen = false;

  // Both row assignments share the coordinate scale, so (s, f_internal) is
  // directly comparable across them.
  std::vector<AssignedSystem> systems;
  systems.push_back({build_M(ac_a, ac_b, imu_i, imu_j, principal_point), {}});
  if (opts.run_both_row_assignments)
    systems.push_back({build_M(ac_b, ac_a, imu_i, imu_j, principal_point), {}});
  for (auto& sys : systems) sys.gs = determinant_system(sys.m);

  for (const auto& sys : systems) {
    const Pencil pencil = linearize(to_matrix_polynomial(coefficient_matrix(sys.gs)));
    const auto roots = filter_solutions(solve_pencil(pencil), opts.tol_consistency);

    for (const CandidateRoot& root : roots) {
      double s = root.s;
      double f_internal = root.f;
      if (opts.polish_roots) polish_root(sys.gs, s, f_internal);

      const double f_reciprocal = f_internal / sys.m.f_scale;
      if (!(f_reciprocal > 0.0)) continue;
      const double focal_px = 1.0 / f_reciprocal;
      if (focal_px < opts.min_focal_px || focal_px > opts.max_focal_px) continue;

      TranslationEstimate translation;
      try {
        translation = recover_translation(sys.m, s, f_reciprocal);
      } catch (const DegenerateNullspace&) {
        degenerate_seen = true;
        continue;
      }

      SolutionCandidate cand;
      cand.s = s;
      cand.f_reciprocal = f_reciprocal;
      cand.focal_px = focal_px;
      cand.t_aligned = translation.t_aligned;
      cand.nullspace_gap = translation.gap;
      cand.eigen_residual = root.eigen_residual;
      cand.residual = system_residual(systems, s, f_internal);
      cand.pose = compose_relative_pose(s, cand.t_aligned, imu_i, imu_j);

      CheiralityVote vote = depth_vote(cand.pose, focal_px, ac_a, ac_b, principal_point);
      if (vote.total > 0 && vote.positive == vote.total) {
        cand.cheirality_ok = true;
      } else {
        cand.pose.t = -cand.pose.t;
        cand.t_aligned = -cand.t_aligned;
        vote = depth_vote(cand.pose, focal_px, ac_a, ac_b, principal_point);
        if (vote.total > 0 && vote.positive == vote.total) {
          cand.cheirality_ok = true;
        } else {
          cand.pose.t = -cand.pose.t;  // restore the provisional sign
          cand.t_aligned = -cand.t_aligned;
          cand.cheirality_ok = false;
        }
      }
      if (opts.require_cheirality && !cand.cheirality_ok) continue;
      candidates.push_back(cand);
    }
  }

  // Merge the two assignments: near-identical (s, f) pairs are one root.
  std::sort(candidates.begin(), candidates.end(),
            [](const SolutionCandidate& a, const SolutionCandidate& b) {
              return std::tie(a.residual, a.eigen_residual) <
                     std::tie(b.residual, b.eigen_residual);
            });
  std::vector<SolutionCandidate> unique;
  for (const auto& cand : candidates) {
    const bool duplicate =
        std::any_of(unique.begin(), unique.end(), [&](const SolutionCandidate& u) {
          return std::abs(u.s - cand.s) < 1e-6 &&
                 std::abs(u.f_reciprocal - cand.f_reciprocal) < 1e-6 * cand.f_reciprocal;
        });
    if (!duplicate) unique.push_back(cand);
  }

  std::sort(unique.begin(), unique.end(),
            [](const SolutionCandidate& a, const SolutionCandidate& b) {
              return std::tuple(a.residual, !a.cheirality_ok, a.eigen_residual) <
                     std::tuple(b.residual, !b.cheirality_ok, b.eigen_residual);
            });

  if (unique.empty() && degenerate_seen)
    throw DegenerateNullspace("all candidate roots had degenerate null spaces");
  // Isolated problems have one machine-precision root; several distinct exact
  // roots mean the data admits a solution continuum (pure rotation and other
  // critical motions sample it through the eigenvalues).
  if (unique.size() >= 2 && unique[0].residual <= 1e-10 && unique[1].residual <= 1e-10)
    throw DegenerateNullspace("solution set is not isolated (critical motion or ambiguous data)");
  return unique;
}

}  // namespace acpose
