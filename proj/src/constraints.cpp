#include "acpose/constraints.hpp"

#include <Eigen/LU>

#include <cmath>

#include "acpose/rotations.hpp"

namespace acpose {

namespace {

using Poly = BivariatePolyd;
using PolyVec3 = std::array<Poly, 3>;
using PolyMat3 = std::array<std::array<Poly, 3>, 3>;

// Numerator of the Cayley y-rotation split by s-power: Ry~ = Y2 s^2 + Y1 s + Y0.
struct CayleyBlocks {
  Matrix3d y0 = Matrix3d::Identity();
  Matrix3d y1;
  Matrix3d y2;
  CayleyBlocks() {
    y1 << 0, 0, 2, 0, 0, 0, -2, 0, 0;
    y2 << -1, 0, 0, 0, 1, 0, 0, 0, -1;
  }
};

// Gravity-aligned, calibrated-up-to-f image point as a polynomial vector:
// q(f) = R_imu e3 + f * R_imu (u, v, 0), with (u, v) recentered and scaled.
PolyVec3 aligned_point(const Matrix3d& r_imu, const Vector2d& x_scaled) {
  const Vector3d c = r_imu.col(2);
  const Vector3d d = r_imu * Vector3d(x_scaled.x(), x_scaled.y(), 0.0);
  PolyVec3 q;
  for (int r = 0; r < 3; ++r) {
    q[r].coeff_ref(0, 0) = c(r);
    q[r].coeff_ref(0, 1) = d(r);
  }
  return q;
}

// Ry~(s) * q: shifts each input coefficient by the s-powers of the blocks.
PolyVec3 cayley_times(const CayleyBlocks& y, const PolyVec3& q) {
  PolyVec3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int b = 0; b <= Poly::kMaxDegF; ++b) {
        const double v = q[c].coeff(0, b);
        if (v == 0.0) continue;
        out[r].coeff_ref(0, b) += y.y0(r, c) * v;
        out[r].coeff_ref(1, b) += y.y1(r, c) * v;
        out[r].coeff_ref(2, b) += y.y2(r, c) * v;
      }
  return out;
}

// Ry~(s)^T * P for a polynomial matrix P whose entries have s-degree 0.
PolyMat3 cayley_transpose_times(const CayleyBlocks& y, const PolyMat3& p) {
  PolyMat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k)
        for (int b = 0; b <= Poly::kMaxDegF; ++b) {
          const double v = p[k][c].coeff(0, b);
          if (v == 0.0) continue;
          out[r][c].coeff_ref(0, b) += y.y0(k, r) * v;
          out[r][c].coeff_ref(1, b) += y.y1(k, r) * v;
          out[r][c].coeff_ref(2, b) += y.y2(k, r) * v;
        }
  return out;
}

PolyMat3 numeric_times(const Matrix3d& n, const PolyMat3& p) {
  PolyMat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      Poly acc;
      for (int k = 0; k < 3; ++k) acc += n(r, k) * p[k][c];
      out[r][c] = acc;
    }
  return out;
}

PolyMat3 cross_matrix_poly(const PolyVec3& v) {
  PolyMat3 m;
  m[0][1] = -1.0 * v[2];
  m[0][2] = v[1];
  m[1][0] = v[2];
  m[1][2] = -1.0 * v[0];
  m[2][0] = -1.0 * v[1];
  m[2][1] = v[0];
  return m;
}

PolyVec3 cross_poly(const PolyVec3& a, const PolyVec3& b) {
  PolyVec3 r;
  r[0] = a[1] * b[2] - a[2] * b[1];
  r[1] = a[2] * b[0] - a[0] * b[2];
  r[2] = a[0] * b[1] - a[1] * b[0];
  return r;
}

void check_correspondence(const AffineCorrespondence& ac, const char* which) {
  if (!ac.x_i.allFinite() || !ac.x_j.allFinite() || !ac.A.allFinite())
    throw DegenerateInput(std::string("non-finite affine correspondence ") + which);
  if (std::abs(ac.A.determinant()) <= 1e-12)
    throw DegenerateInput(std::string("singular affine matrix in correspondence ") + which);
}

}  // namespace

ConstraintMatrix build_M(const AffineCorrespondence& ac_a, const AffineCorrespondence& ac_b,
                         const ImuAttitude& imu_i, const ImuAttitude& imu_j,
                         const Vector2d& principal_point) {
  check_correspondence(ac_a, "a");
  check_correspondence(ac_b, "b");
  if (!std::isfinite(imu_i.roll) || !std::isfinite(imu_i.pitch) ||
      !std::isfinite(imu_j.roll) || !std::isfinite(imu_j.pitch))
    throw DegenerateInput("non-finite IMU attitude");

  ConstraintMatrix out;
  out.recentered_a = ac_a;
  out.recentered_b = ac_b;
  out.recentered_a.x_i -= principal_point;
  out.recentered_a.x_j -= principal_point;
  out.recentered_b.x_i -= principal_point;
  out.recentered_b.x_j -= principal_point;

  double scale = 1.0;
  for (const auto* ac : {&out.recentered_a, &out.recentered_b}) {
    scale = std::max(scale, ac->x_i.cwiseAbs().maxCoeff());
    scale = std::max(scale, ac->x_j.cwiseAbs().maxCoeff());
  }
  out.f_scale = scale;

  const Matrix3d r_i = imu_alignment(imu_i);
  const Matrix3d r_j = imu_alignment(imu_j);
  const CayleyBlocks y;

  const PolyVec3 qi_a = aligned_point(r_i, out.recentered_a.x_i / scale);
  const PolyVec3 qj_a = aligned_point(r_j, out.recentered_a.x_j / scale);
  const PolyVec3 qi_b = aligned_point(r_i, out.recentered_b.x_i / scale);
  const PolyVec3 qj_b = aligned_point(r_j, out.recentered_b.x_j / scale);

  // Affine rows of correspondence a: the first two components of
  //   R_imu_i^T Ry~^T [q_j]x t~  -  A^T ( R_imu_j^T [Ry~ q_i]x t~ )
  // vanish; the K^-T factor common to both sides has already cancelled.
  const PolyMat3 lhs = numeric_times(r_i.transpose(), cayley_transpose_times(y, cross_matrix_poly(qj_a)));
  const PolyMat3 rhs = numeric_times(r_j.transpose(), cross_matrix_poly(cayley_times(y, qi_a)));
  const Matrix2d at = ac_a.A.transpose();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c)
      out.m[r][c] = lhs[r][c] - (at(r, 0) * rhs[0][c] + at(r, 1) * rhs[1][c]);

  // Point rows: the epipolar constraint q_j^T [t~]x Ry~ q_i = 0 rewritten
  // as ((Ry~ q_i) x q_j) . t~ = 0.
  const PolyVec3 point_a = cross_poly(cayley_times(y, qi_a), qj_a);
  const PolyVec3 point_b = cross_poly(cayley_times(y, qi_b), qj_b);
  for (int c = 0; c < 3; ++c) {
    out.m[2][c] = point_a[c];
    out.m[3][c] = point_b[c];
  }

  for (int r = 0; r < 4; ++r) {
    double mx = 0.0;
    for (int c = 0; c < 3; ++c) mx = std::max(mx, out.m[r][c].max_abs_coeff());
    out.row_scale[r] = mx;
    if (mx > 0.0)
      for (int c = 0; c < 3; ++c) out.m[r][c] *= 1.0 / mx;
  }
  return out;
}

DeterminantSystem determinant_system(const ConstraintMatrix& m) {
  auto minor_rows = [&m](int r0, int r1, int r2) {
    std::array<std::array<BivariatePolyd, 3>, 3> sub;
    sub[0] = m.m[r0];
    sub[1] = m.m[r1];
    sub[2] = m.m[r2];
    return det3(sub);
  };
  DeterminantSystem out;
  out.f_scale = m.f_scale;
  out.g[0] = minor_rows(0, 1, 2);
  out.g[1] = minor_rows(0, 1, 3);
  out.g[2] = minor_rows(0, 2, 3);
  out.g[3] = minor_rows(1, 2, 3);
  for (int k = 0; k < 4; ++k) {
    const double mx = out.g[k].max_abs_coeff();
    out.scale[k] = mx;
    if (mx > 0.0) out.g[k] *= 1.0 / mx;
  }
  return out;
}

CoefficientMatrix coefficient_matrix(const DeterminantSystem& gs) {
  CoefficientMatrix out;
  out.f_scale = gs.f_scale;
  out.c.setZero();
  const BivariatePolyd f = BivariatePolyd::monomial(0, 1);
  const std::array<BivariatePolyd, 6> rows = {f * gs.g[0], f * gs.g[1], gs.g[2],
                                              gs.g[3],     gs.g[0],     gs.g[1]};
  for (int r = 0; r < 6; ++r)
    for (int a = 0; a <= BivariatePolyd::kMaxDegS; ++a)
      for (int b = 0; b <= BivariatePolyd::kMaxDegF; ++b)
        out.c(r, 6 * a + b) = rows[r].coeff(a, b);
  return out;
}

Eigen::Matrix<double, 42, 1> monomial_basis(double s, double f) {
  Eigen::Matrix<double, 42, 1> x;
  double sp = 1.0;
  for (int a = 0; a <= 6; ++a) {
    double fp = 1.0;
    for (int b = 0; b <= 5; ++b) {
      x(6 * a + b) = sp * fp;
      fp *= f;
    }
    sp *= s;
  }
  return x;
}

}  // namespace acpose
