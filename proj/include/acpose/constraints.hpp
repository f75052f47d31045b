#pragma once

// Polynomial constraint system of the minimal problem. Two affine
// correspondences plus per-view vertical alignment produce a 4x3 matrix M
// of bivariate polynomials in (s, f) annihilating the aligned translation:
// rows 1-2 are the affine constraints of the first correspondence, row 3
// its point constraint, row 4 the point constraint of the second one.
// The four 3-row determinants g_1..g_4 then depend on (s, f) alone and are
// stacked, together with f g_1 and f g_2, into a 6x42 coefficient matrix
// over the 42-monomial basis (f fastest, s slowest).

#include <Eigen/Core>

#include <array>

#include "acpose/bivariate_poly.hpp"
#include "acpose/types.hpp"

namespace acpose {

struct ConstraintMatrix {
  /// Row-normalized polynomial entries; each row's max-abs coefficient is 1.
  std::array<std::array<BivariatePolyd, 3>, 4> m;

  /// Inputs after principal-point subtraction (pixel units).
  AffineCorrespondence recentered_a;
  AffineCorrespondence recentered_b;

  /// The polynomials use the equilibrated variable f_internal = f_scale / focal_px.
  /// f_scale is the max-abs recentered coordinate, clamped to at least 1;
  /// it keeps coefficients near unit size for pixel-scale inputs.
  double f_scale = 1.0;

  /// Max-abs coefficient scale divided out of each row.
  std::array<double, 4> row_scale{1.0, 1.0, 1.0, 1.0};

  Eigen::Matrix<double, 4, 3> eval(double s, double f_internal) const {
    Eigen::Matrix<double, 4, 3> out;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 3; ++c) out(r, c) = acpose::eval(m[r][c], s, f_internal);
    return out;
  }
};

/// Builds M from two correspondences and the two vertical directions.
/// Throws DegenerateInput when either affine matrix is singular beyond
/// tolerance or any input is non-finite.
ConstraintMatrix build_M(const AffineCorrespondence& ac_a, const AffineCorrespondence& ac_b,
                         const ImuAttitude& imu_i, const ImuAttitude& imu_j,
                         const Vector2d& principal_point);

struct DeterminantSystem {
  /// g[0] = det(rows 123), g[1] = det(124), g[2] = det(134), g[3] = det(234),
  /// each scaled to unit max-abs coefficient.
  std::array<BivariatePolyd, 4> g;
  double f_scale = 1.0;
  /// Max-abs coefficient divided out of each determinant. A scale collapsing
  /// to rounding noise flags a structurally vanishing determinant (duplicated
  /// rows, degenerate data).
  std::array<double, 4> scale{0.0, 0.0, 0.0, 0.0};
};

DeterminantSystem determinant_system(const ConstraintMatrix& m);

struct CoefficientMatrix {
  /// Rows are {f g1, f g2, g3, g4, g1, g2} flattened on the 42-monomial
  /// basis; column index of s^a f^b is 6 a + b.
  Eigen::Matrix<double, 6, 42> c;
  double f_scale = 1.0;
};

CoefficientMatrix coefficient_matrix(const DeterminantSystem& gs);

/// The 42-monomial vector (1, f, .., f^5, s, s f, .., s^6 f^5), f fastest.
Eigen::Matrix<double, 42, 1> monomial_basis(double s, double f);

}  // namespace acpose
