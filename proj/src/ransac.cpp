#include "acpose/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "acpose/rotations.hpp"

namespace acpose {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct Score {
  int inliers = -1;
  double truncated = std::numeric_limits<double>::infinity();
  int iteration = std::numeric_limits<int>::max();

  // Higher inlier count wins; ties fall to the smaller truncated residual,
  // then to the earlier iteration so parallel schedules stay reproducible.
  bool better_than(const Score& o) const {
    if (inliers != o.inliers) return inliers > o.inliers;
    if (truncated != o.truncated) return truncated < o.truncated;
    return iteration < o.iteration;
  }
};

Score score_model(const Matrix3d& f, std::span<const AffineCorrespondence> acs,
                  double threshold, int iteration) {
  Score s;
  s.inliers = 0;
  s.truncated = 0.0;
  s.iteration = iteration;
  for (const auto& ac : acs) {
    const double d = sampson_distance(f, ac.x_i, ac.x_j);
    if (d < threshold) ++s.inliers;
    s.truncated += std::min(d, threshold);
  }
  return s;
}

int adaptive_iterations(double confidence, int inliers, int n, int cap) {
  const double w = static_cast<double>(inliers) / static_cast<double>(n);
  const double p_good = w * w;  // sample size 2
  if (p_good <= 0.0) return cap;
  if (p_good >= 1.0) return 1;
  const double num = std::log(1.0 - confidence);
  const double den = std::log(1.0 - p_good);
  const double need = num / den;
  if (!(need > 0.0) || need >= static_cast<double>(cap)) return cap;
  return static_cast<int>(std::ceil(need));
}

}  // namespace

Matrix3d fundamental_from(const Pose& pose, double focal_px, const Vector2d& principal_point) {
  Matrix3d k_inv;
  k_inv << 1.0 / focal_px, 0, -principal_point.x() / focal_px,  //
      0, 1.0 / focal_px, -principal_point.y() / focal_px,       //
      0, 0, 1;
  const Matrix3d e = cross_matrix(pose.t) * pose.R;
  Matrix3d f = k_inv.transpose() * e * k_inv;
  const double n = f.norm();
  return n > 0.0 ? Matrix3d(f / n) : f;
}

double sampson_distance(const Matrix3d& f, const Vector2d& x_i, const Vector2d& x_j) {
  const Vector3d pi(x_i.x(), x_i.y(), 1.0);
  const Vector3d pj(x_j.x(), x_j.y(), 1.0);
  const double eps = pj.dot(f * pi);
  const Vector3d li = f * pi;
  const Vector3d lj = f.transpose() * pj;
  const double denom = li.head<2>().squaredNorm() + lj.head<2>().squaredNorm();
  if (denom <= 0.0) return eps == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(eps) / std::sqrt(denom);
}

RobustResult estimate(std::span<const AffineCorrespondence> acs, const ImuAttitude& imu_i,
                      const ImuAttitude& imu_j, const Vector2d& principal_point,
                      const RansacConfig& cfg) {
  const int n = static_cast<int>(acs.size());
  if (n < 2) throw TooFewCorrespondences("robust estimation needs at least 2 correspondences");
  if (!(cfg.inlier_threshold_px > 0.0))
    throw std::invalid_argument("inlier threshold must be positive");
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
    throw std::invalid_argument("confidence must be in (0, 1)");

  std::optional<SolutionCandidate> best;
  Score best_score;
  int budget = cfg.max_iterations;
  int iter = 0;
  for (; iter < budget; ++iter) {
    std::mt19937_64 gen(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(iter)));
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int a = pick(gen);
    int b = pick(gen);
    while (b == a) b = pick(gen);

    std::vector<SolutionCandidate> candidates;
    try {
      candidates = solve_2ac(acs[a], acs[b], imu_i, imu_j, principal_point,
                             cfg.solve_options);
    } catch (const DegenerateInput&) {
      continue;
    } catch (const DegenerateNullspace&) {
      continue;
    }

    for (const auto& cand : candidates) {
      const Matrix3d f = fundamental_from(cand.pose, cand.focal_px, principal_point);
      const Score s = score_model(f, acs, cfg.inlier_threshold_px, iter);
      if (s.better_than(best_score)) {
        best_score = s;
        best = cand;
        budget = std::min(cfg.max_iterations,
                          std::max(iter + 1, adaptive_iterations(cfg.confidence, s.inliers,
                                                                 n, cfg.max_iterations)));
      }
    }
  }

  if (!best || best_score.inliers < cfg.min_inliers)
    throw NoModelFound("no model reached the inlier minimum");

  RobustResult out;
  out.best = *best;
  out.iterations_run = iter;
  out.inlier_count = best_score.inliers;
  out.truncated_residual_sum = best_score.truncated;
  out.inlier_mask.assign(acs.size(), 0);
  const Matrix3d f = fundamental_from(out.best.pose, out.best.focal_px, principal_point);
  for (std::size_t k = 0; k < acs.size(); ++k)
    out.inlier_mask[k] =
        sampson_distance(f, acs[k].x_i, acs[k].x_j) < cfg.inlier_threshold_px ? 1 : 0;

  // Re-fix the translation sign by majority cheirality over the inliers.
  int pos = 0, neg = 0, votes = 0;
  for (std::size_t k = 0; k < acs.size(); ++k) {
    if (!out.inlier_mask[k]) continue;
    try {
      const auto [di, dj] = triangulate_depth_signs(out.best.pose.R, out.best.pose.t,
                                                    out.best.focal_px, acs[k],
                                                    principal_point);
      ++votes;
      if (di > 0.0 && dj > 0.0) ++pos;
      const auto [mi, mj] = triangulate_depth_signs(out.best.pose.R, -out.best.pose.t,
                                                    out.best.focal_px, acs[k],
                                                    principal_point);
      if (mi > 0.0 && mj > 0.0) ++neg;
    } catch (const DegenerateInput&) {
    }
  }
  if (neg > pos) {
    out.best.pose.t = -out.best.pose.t;
    out.best.t_aligned = -out.best.t_aligned;
    std::swap(pos, neg);
  }
  out.best.cheirality_ok = votes > 0 && 2 * pos > votes;
  return out;
}

}  // namespace acpose
