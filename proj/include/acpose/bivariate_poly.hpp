#pragma once

// Dense bivariate polynomials in (s, f) on a fixed 7x6 coefficient grid
// (s^0..s^6, f^0..f^5). That capacity is exactly what the four determinant
// polynomials need; anything larger is an error, not a resize.

#include <Eigen/Core>

#include <array>
#include <cmath>

#include "acpose/types.hpp"

namespace acpose {

template <typename T>
class BivariatePoly {
 public:
  static constexpr int kMaxDegS = 6;
  static constexpr int kMaxDegF = 5;
  using Grid = Eigen::Matrix<T, kMaxDegS + 1, kMaxDegF + 1>;

  BivariatePoly() : c_(Grid::Zero()) {}

  static BivariatePoly constant(T v) {
    BivariatePoly p;
    p.c_(0, 0) = v;
    return p;
  }

  static BivariatePoly monomial(int deg_s, int deg_f, T coeff = T(1)) {
    BivariatePoly p;
    p.coeff_ref(deg_s, deg_f) = coeff;
    return p;
  }

  T coeff(int deg_s, int deg_f) const { return c_(deg_s, deg_f); }
  T& coeff_ref(int deg_s, int deg_f) { return c_(deg_s, deg_f); }

  const Grid& grid() const { return c_; }
  Grid& grid() { return c_; }

  T max_abs_coeff() const { return c_.cwiseAbs().maxCoeff(); }

  /// Largest s-degree carrying a coefficient with |c| > tol (-1 if none).
  int degree_s(T tol = T(0)) const {
    for (int a = kMaxDegS; a >= 0; --a)
      for (int b = 0; b <= kMaxDegF; ++b)
        if (std::abs(c_(a, b)) > tol) return a;
    return -1;
  }

  int degree_f(T tol = T(0)) const {
    for (int b = kMaxDegF; b >= 0; --b)
      for (int a = 0; a <= kMaxDegS; ++a)
        if (std::abs(c_(a, b)) > tol) return b;
    return -1;
  }

  BivariatePoly& operator+=(const BivariatePoly& o) {
    c_ += o.c_;
    return *this;
  }
  BivariatePoly& operator-=(const BivariatePoly& o) {
    c_ -= o.c_;
    return *this;
  }
  BivariatePoly& operator*=(T k) {
    c_ *= k;
    return *this;
  }

 private:
  Grid c_;
};

template <typename T>
BivariatePoly<T> operator+(BivariatePoly<T> a, const BivariatePoly<T>& b) {
  return a += b;
}

template <typename T>
BivariatePoly<T> operator-(BivariatePoly<T> a, const BivariatePoly<T>& b) {
  return a -= b;
}

template <typename T>
BivariatePoly<T> operator*(BivariatePoly<T> a, T k) {
  return a *= k;
}

template <typename T>
BivariatePoly<T> operator*(T k, BivariatePoly<T> a) {
  return a *= k;
}

/// Coefficient-grid convolution. Throws DegreeOverflow if a nonzero product
/// term lands outside the grid.
template <typename T>
BivariatePoly<T> operator*(const BivariatePoly<T>& a, const BivariatePoly<T>& b) {
  constexpr int ns = BivariatePoly<T>::kMaxDegS;
  constexpr int nf = BivariatePoly<T>::kMaxDegF;
  BivariatePoly<T> r;
  for (int sa = 0; sa <= ns; ++sa)
    for (int fa = 0; fa <= nf; ++fa) {
      const T ca = a.coeff(sa, fa);
      if (ca == T(0)) continue;
      for (int sb = 0; sb <= ns; ++sb)
        for (int fb = 0; fb <= nf; ++fb) {
          const T cb = b.coeff(sb, fb);
          if (cb == T(0)) continue;
          if (sa + sb > ns || fa + fb > nf)
            throw DegreeOverflow("bivariate product exceeds the (6, 5) degree grid");
          r.coeff_ref(sa + sb, fa + fb) += ca * cb;
        }
    }
  return r;
}

/// Horner evaluation, f innermost.
template <typename T>
T eval(const BivariatePoly<T>& p, T s, T f) {
  T acc = T(0);
  for (int a = BivariatePoly<T>::kMaxDegS; a >= 0; --a) {
    T row = T(0);
    for (int b = BivariatePoly<T>::kMaxDegF; b >= 0; --b) row = row * f + p.coeff(a, b);
    acc = acc * s + row;
  }
  return acc;
}

/// Partial derivative values at (s, f).
template <typename T>
T eval_ds(const BivariatePoly<T>& p, T s, T f) {
  T acc = T(0);
  for (int a = BivariatePoly<T>::kMaxDegS; a >= 1; --a) {
    T row = T(0);
    for (int b = BivariatePoly<T>::kMaxDegF; b >= 0; --b) row = row * f + p.coeff(a, b);
    acc = acc * s + T(a) * row;
  }
  return acc;
}

template <typename T>
T eval_df(const BivariatePoly<T>& p, T s, T f) {
  T acc = T(0);
  for (int a = BivariatePoly<T>::kMaxDegS; a >= 0; --a) {
    T row = T(0);
    for (int b = BivariatePoly<T>::kMaxDegF; b >= 1; --b) row = row * f + T(b) * p.coeff(a, b);
    acc = acc * s + row;
  }
  return acc;
}

/// Cofactor-expansion determinant of a 3x3 matrix of polynomials.
template <typename T>
BivariatePoly<T> det3(const std::array<std::array<BivariatePoly<T>, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

using BivariatePolyd = BivariatePoly<double>;

}  // namespace acpose
