#pragma once

// Polynomial eigenvalue stage: the 6x42 coefficient matrix becomes a
// degree-6 matrix polynomial B'(s) acting on the focal monomial vector
// J = (1, f, .., f^5), linearized to a 36x36 companion pencil D L = s N L.
// Real eigenvalues with structurally consistent eigenvectors yield (s, f)
// pairs; the translation then comes from the null space of M(s, f).

#include <Eigen/Core>

#include <array>
#include <vector>

#include "acpose/constraints.hpp"
#include "acpose/types.hpp"

namespace acpose {

struct MatrixPolynomial {
  /// b[k] multiplies s^k.
  std::array<Eigen::Matrix<double, 6, 6>, 7> b;
  double f_scale = 1.0;

  Eigen::Matrix<double, 6, 6> eval(double s) const {
    Eigen::Matrix<double, 6, 6> acc = b[6];
    for (int k = 5; k >= 0; --k) acc = acc * s + b[k];
    return acc;
  }
};

/// Regroups the 42 columns into 7 powers of s: evaluating the blocks at s and
/// applying them to (1, f, .., f^5) reproduces the full coefficient matrix
/// acting on the 42-monomial basis.
MatrixPolynomial to_matrix_polynomial(const CoefficientMatrix& c);

struct Pencil {
  Eigen::Matrix<double, 36, 36> D;
  Eigen::Matrix<double, 36, 36> N;
  double f_scale = 1.0;
};

/// Companion linearization: identity super-diagonal blocks in D with bottom
/// row (-b0 .. -b5); N is identity except the bottom-right block b6.
Pencil linearize(const MatrixPolynomial& mp);

struct PencilEigenpair {
  double s = 0.0;
  Eigen::Matrix<double, 36, 1> L;
  double residual = 0.0;  // ||D L - s N L|| / ||L||
};

/// Real, finite eigenpairs of the pencil via the QZ decomposition.
/// Complex pairs with relative imaginary part below 1e-8 are accepted with
/// the imaginary part dropped; infinite eigenvalues are discarded.
/// Throws EigenFailure (with a condition estimate) if QZ does not converge.
std::vector<PencilEigenpair> solve_pencil(const Pencil& p);

struct CandidateRoot {
  double s = 0.0;
  double f = 0.0;  // in the internal (equilibrated) f variable
  double eigen_residual = 0.0;
};

/// Keeps eigenpairs whose eigenvector looks like (J, s J, .., s^5 J) with
/// J = (1, f, f^2, ..): first entry normalizable, f = L2 > 0, |L3 - f^2|
/// within tolerance, and the first block shift consistent with s.
std::vector<CandidateRoot> filter_solutions(const std::vector<PencilEigenpair>& pairs,
                                            double tol_consistency = 1e-4);

struct TranslationEstimate {
  Vector3d t_aligned = Vector3d::Zero();  // unit; sign fixed later by cheirality
  double gap = 0.0;  // sigma_min / sigma_2nd_min of the row-normalized evaluation
};

/// Null space of M evaluated at (s, f). f is in reciprocal-pixel units; the
/// internal equilibration of M is applied here. Throws DegenerateNullspace
/// when the two smallest singular values both collapse (pure rotation or
/// duplicated data).
TranslationEstimate recover_translation(const ConstraintMatrix& m, double s,
                                        double f_reciprocal);

}  // namespace acpose
