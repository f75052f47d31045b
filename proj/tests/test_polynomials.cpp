#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "acpose/bivariate_poly.hpp"

using namespace acpose;

namespace {

using Poly = BivariatePolyd;

Poly random_poly(std::mt19937_64& rng, int max_s, int max_f) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly p;
  for (int a = 0; a <= max_s; ++a)
    for (int b = 0; b <= max_f; ++b) p.coeff_ref(a, b) = u(rng);
  return p;
}

// Independent evaluation: plain monomial sum with std::pow.
double eval_monomial_sum(const Poly& p, double s, double f) {
  double acc = 0.0;
  for (int a = 0; a <= Poly::kMaxDegS; ++a)
    for (int b = 0; b <= Poly::kMaxDegF; ++b)
      acc += p.coeff(a, b) * std::pow(s, a) * std::pow(f, b);
  return acc;
}

}  // namespace

TEST_SUITE_BEGIN("polynomials");

TEST_CASE("addition identities") {
  std::mt19937_64 rng(11);
  const Poly p = random_poly(rng, 4, 3);
  CHECK(((p + Poly{}).grid() - p.grid()).norm() == 0.0);
  CHECK((p + (-1.0 * p)).max_abs_coeff() == 0.0);

  // (1 + s f) + 2 f
  Poly a = Poly::constant(1.0);
  a.coeff_ref(1, 1) = 1.0;
  const Poly sum = a + Poly::monomial(0, 1, 2.0);
  CHECK(sum.coeff(0, 0) == 1.0);
  CHECK(sum.coeff(1, 1) == 1.0);
  CHECK(sum.coeff(0, 1) == 2.0);
  CHECK(sum.grid().cwiseAbs().sum() == 4.0);
}

TEST_CASE("multiplication basics") {
  std::mt19937_64 rng(12);
  const Poly p = random_poly(rng, 3, 2);
  CHECK(((p * Poly::constant(1.0)).grid() - p.grid()).norm() == 0.0);

  const Poly sf = Poly::monomial(1, 0) * Poly::monomial(0, 1);
  CHECK(sf.coeff(1, 1) == 1.0);
  CHECK(sf.grid().cwiseAbs().sum() == 1.0);
}

TEST_CASE("(1+s)^2 (1+f) expands correctly") {
  Poly one_s = Poly::constant(1.0);
  one_s.coeff_ref(1, 0) = 1.0;
  Poly one_f = Poly::constant(1.0);
  one_f.coeff_ref(0, 1) = 1.0;
  const Poly prod = one_s * one_s * one_f;

  int nonzero = 0;
  for (int a = 0; a <= Poly::kMaxDegS; ++a)
    for (int b = 0; b <= Poly::kMaxDegF; ++b)
      if (prod.coeff(a, b) != 0.0) ++nonzero;
  CHECK(nonzero == 6);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const double s = u(rng), f = u(rng);
    const double direct = (1.0 + s) * (1.0 + s) * (1.0 + f);
    CHECK(eval(prod, s, f) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("multiplication overflow throws") {
  CHECK_THROWS_AS(Poly::monomial(4, 0) * Poly::monomial(3, 0), DegreeOverflow);
  CHECK_THROWS_AS(Poly::monomial(0, 3) * Poly::monomial(0, 3), DegreeOverflow);
  // Zero coefficients never overflow.
  CHECK_NOTHROW(Poly::monomial(6, 5) * Poly::constant(2.0));
}

TEST_CASE("det3 basics") {
  const Poly one = Poly::constant(1.0);
  std::array<std::array<Poly, 3>, 3> identity{};
  identity[0][0] = one;
  identity[1][1] = one;
  identity[2][2] = one;
  const Poly d_id = det3(identity);
  CHECK(d_id.coeff(0, 0) == 1.0);
  CHECK(d_id.grid().cwiseAbs().sum() == 1.0);

  std::array<std::array<Poly, 3>, 3> diag{};
  diag[0][0] = Poly::monomial(1, 0);
  diag[1][1] = Poly::monomial(0, 1);
  diag[2][2] = one;
  const Poly d = det3(diag);
  CHECK(d.coeff(1, 1) == 1.0);
  CHECK(d.grid().cwiseAbs().sum() == 1.0);
}

TEST_CASE("det3 of constants matches the numeric determinant") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Eigen::Matrix3d m;
    std::array<std::array<Poly, 3>, 3> pm{};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        m(r, c) = u(rng);
        pm[r][c] = Poly::constant(m(r, c));
      }
    CHECK(det3(pm).coeff(0, 0) == doctest::Approx(m.determinant()).epsilon(1e-12));
  }
}

TEST_CASE("eval basics") {
  CHECK(eval(Poly::constant(5.0), 3.7, -1.2) == 5.0);
  CHECK(eval(Poly::monomial(2, 1), 2.0, 3.0) == 12.0);

  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Poly p = random_poly(rng, 6, 5);
    const double s = u(rng), f = u(rng);
    const double horner = eval(p, s, f);
    const double naive = eval_monomial_sum(p, s, f);
    CHECK(std::abs(horner - naive) < 1e-13 * (1.0 + std::abs(naive)));
  }
}

TEST_CASE("derivative evaluation matches finite differences") {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const double h = 1e-6;
  for (int k = 0; k < 50; ++k) {
    const Poly p = random_poly(rng, 5, 4);
    const double s = u(rng), f = u(rng);
    const double ds_fd = (eval(p, s + h, f) - eval(p, s - h, f)) / (2.0 * h);
    const double df_fd = (eval(p, s, f + h) - eval(p, s, f - h)) / (2.0 * h);
    CHECK(eval_ds(p, s, f) == doctest::Approx(ds_fd).epsilon(1e-6));
    CHECK(eval_df(p, s, f) == doctest::Approx(df_fd).epsilon(1e-6));
  }
}

TEST_CASE("evaluation homomorphism over products") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const Poly a = random_poly(rng, 3, 2);
    const Poly b = random_poly(rng, 3, 2);
    const double s = u(rng), f = u(rng);
    const double lhs = eval(a * b, s, f);
    const double rhs = eval(a, s, f) * eval(b, s, f);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("det3 evaluation matches the numeric determinant of evaluations") {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<std::array<Poly, 3>, 3> pm{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) pm[r][c] = random_poly(rng, 2, 1);
  const Poly d = det3(pm);
  for (int k = 0; k < 50; ++k) {
    const double s = u(rng), f = u(rng);
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = eval(pm[r][c], s, f);
    const double expected = m.determinant();
    CHECK(std::abs(eval(d, s, f) - expected) <= 1e-9 * (1.0 + std::abs(expected)));
  }
}

TEST_SUITE_END();
