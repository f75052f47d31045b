#include "acpose/polyeig.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

namespace acpose {

namespace {

using Matrix36d = Eigen::Matrix<double, 36, 36>;
using Vector36d = Eigen::Matrix<double, 36, 1>;

// Power-of-two row/column equilibration of the pair (D, N). Exact in
// floating point; eigenvalues are untouched and right eigenvectors of the
// scaled pair map back through the column scale.
struct Equilibration {
  Vector36d row = Vector36d::Ones();
  Vector36d col = Vector36d::Ones();
};

Equilibration equilibrate(Matrix36d& d, Matrix36d& n) {
  Equilibration eq;
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int r = 0; r < 36; ++r) {
      const double m =
          std::max(d.row(r).cwiseAbs().maxCoeff(), n.row(r).cwiseAbs().maxCoeff());
      if (m <= 0.0 || !std::isfinite(m)) continue;
      const double e = std::exp2(-std::round(std::log2(m)));
      if (e == 1.0) continue;
      d.row(r) *= e;
      n.row(r) *= e;
      eq.row(r) *= e;
    }
    for (int c = 0; c < 36; ++c) {
      const double m =
          std::max(d.col(c).cwiseAbs().maxCoeff(), n.col(c).cwiseAbs().maxCoeff());
      if (m <= 0.0 || !std::isfinite(m)) continue;
      const double e = std::exp2(-std::round(std::log2(m)));
      if (e == 1.0) continue;
      d.col(c) *= e;
      n.col(c) *= e;
      eq.col(c) *= e;
    }
  }
  return eq;
}

}  // namespace

MatrixPolynomial to_matrix_polynomial(const CoefficientMatrix& c) {
  MatrixPolynomial mp;
  mp.f_scale = c.f_scale;
  for (int k = 0; k <= 6; ++k) mp.b[k] = c.c.block<6, 6>(0, 6 * k);
  return mp;
}

Pencil linearize(const MatrixPolynomial& mp) {
  Pencil p;
  p.f_scale = mp.f_scale;
  p.D.setZero();
  p.N.setIdentity();
  for (int k = 0; k < 5; ++k)
    p.D.block<6, 6>(6 * k, 6 * (k + 1)) = Eigen::Matrix<double, 6, 6>::Identity();
  for (int k = 0; k < 6; ++k) p.D.block<6, 6>(30, 6 * k) = -mp.b[k];
  p.N.block<6, 6>(30, 30) = mp.b[6];
  return p;
}

std::vector<PencilEigenpair> solve_pencil(const Pencil& p) {
  Matrix36d d = p.D;
  Matrix36d n = p.N;
  const Equilibration eq = equilibrate(d, n);

  Eigen::GeneralizedEigenSolver<Matrix36d> solver;
  solver.compute(d, n, true);
  if (solver.info() != Eigen::Success) {
    Eigen::JacobiSVD<Matrix36d> svd(p.N);
    const double smin = svd.singularValues()(35);
    const double cond = smin > 0.0 ? svd.singularValues()(0) / smin
                                   : std::numeric_limits<double>::infinity();
    throw EigenFailure("QZ iteration failed to converge", cond);
  }

  std::vector<PencilEigenpair> out;
  out.reserve(36);
  for (int k = 0; k < 36; ++k) {
    const std::complex<double> alpha = solver.alphas()(k);
    const double beta = solver.betas()(k);
    if (std::abs(beta) <= 1e-12 * (1.0 + std::abs(alpha))) continue;  // infinite
    const std::complex<double> lambda = alpha / beta;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) continue;
    if (std::abs(lambda.imag()) > 1e-8 * (1.0 + std::abs(lambda.real()))) continue;

    // Rotate the complex eigenvector so its dominant entry is real before
    // dropping the imaginary part, then undo the column equilibration.
    Eigen::Matrix<std::complex<double>, 36, 1> v = solver.eigenvectors().col(k);
    int dominant = 0;
    v.cwiseAbs().maxCoeff(&dominant);
    const std::complex<double> phase = v(dominant) / std::abs(v(dominant));
    Vector36d l = (v / phase).real();
    l = eq.col.asDiagonal() * l;
    const double norm = l.norm();
    if (!(norm > 0.0) || !l.allFinite()) continue;
    l /= norm;

    PencilEigenpair pair;
    pair.s = lambda.real();
    pair.L = l;
    pair.residual = (p.D * l - pair.s * (p.N * l)).norm();
    out.push_back(pair);
  }
  return out;
}

std::vector<CandidateRoot> filter_solutions(const std::vector<PencilEigenpair>& pairs,
                                            double tol_consistency) {
  std::vector<CandidateRoot> out;
  for (const auto& pair : pairs) {
    const Vector36d& raw = pair.L;
    if (std::abs(raw(0)) <= 1e-10 * raw.norm()) continue;
    const Vector36d l = raw / raw(0);
    const double f = l(1);
    if (!(f > 0.0) || !std::isfinite(f)) continue;
    if (std::abs(l(2) - f * f) > tol_consistency * (1.0 + f * f)) continue;

    // First companion block must repeat the head scaled by s.
    double shift_err = 0.0;
    double head_mag = 1.0;
    for (int q = 0; q < 6; ++q) {
      shift_err = std::max(shift_err, std::abs(l(6 + q) - pair.s * l(q)));
      head_mag = std::max(head_mag, std::abs(l(q)));
    }
    if (shift_err > tol_consistency * (1.0 + std::abs(pair.s)) * head_mag) continue;

    out.push_back({pair.s, f, pair.residual});
  }
  return out;
}

TranslationEstimate recover_translation(const ConstraintMatrix& m, double s,
                                        double f_reciprocal) {
  if (!std::isfinite(s) || !std::isfinite(f_reciprocal))
    throw DegenerateNullspace("non-finite (s, f) for translation recovery");
  Eigen::Matrix<double, 4, 3> e = m.eval(s, f_reciprocal * m.f_scale);
  for (int r = 0; r < 4; ++r) {
    const double rn = e.row(r).norm();
    // Structurally vanishing rows stay small instead of being blown up to
    // unit size; they carry the degeneracy signal.
    if (rn > 1e-10) e.row(r) /= rn;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(e, Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (!(sv(0) > 1e-10) || (sv(1) < 1e-8 * sv(0) && sv(2) < 1e-8 * sv(0)))
    throw DegenerateNullspace("translation null space is not one-dimensional");

  TranslationEstimate out;
  out.t_aligned = svd.matrixV().col(2);
  out.t_aligned.normalize();
  out.gap = sv(2) / sv(1);
  return out;
}

}  // namespace acpose
