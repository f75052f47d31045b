#include <doctest.h>

#include <Eigen/Geometry>

#include <random>

#include "acpose/metrics.hpp"
#include "acpose/rotations.hpp"

using namespace acpose;

namespace {

Matrix3d random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Quaterniond q(u(rng), u(rng), u(rng), u(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("rotation error reference cases") {
  std::mt19937_64 rng(21);
  const Matrix3d r = random_rotation(rng);
  CHECK(rotation_error_deg(r, r) == doctest::Approx(0.0).epsilon(1e-9));

  // 10 degrees about an arbitrary axis.
  const Vector3d axis = Vector3d(0.3, -0.5, 0.8).normalized();
  const Matrix3d extra = Eigen::AngleAxisd(10.0 * kDegToRad, axis).toRotationMatrix();
  CHECK(rotation_error_deg(extra * r, r) == doctest::Approx(10.0).epsilon(1e-9));

  Matrix3d half_turn = Matrix3d::Identity();
  half_turn(1, 1) = -1.0;
  half_turn(2, 2) = -1.0;
  CHECK(rotation_error_deg(r * half_turn, r) == doctest::Approx(180.0).epsilon(1e-9));
}

TEST_CASE("rotation error is symmetric and left-invariant") {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 100; ++k) {
    const Matrix3d a = random_rotation(rng);
    const Matrix3d b = random_rotation(rng);
    const Matrix3d g = random_rotation(rng);
    const double e = rotation_error_deg(a, b);
    CHECK(e == doctest::Approx(rotation_error_deg(b, a)).epsilon(1e-9));
    CHECK(e == doctest::Approx(rotation_error_deg(g * a, g * b)).epsilon(1e-8));
    CHECK(e >= 0.0);
    CHECK(e <= 180.0);
  }
}

TEST_CASE("translation error reference cases") {
  const Vector3d t(0.0, 0.6, 0.8);
  CHECK(translation_error_deg(t, t) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(translation_error_deg(-t, t) == doctest::Approx(180.0).epsilon(1e-9));
  CHECK(translation_error_deg_sign_agnostic(-t, t) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(translation_error_deg(Vector3d::UnitX(), Vector3d::UnitY()) ==
        doctest::Approx(90.0).epsilon(1e-9));
  CHECK_THROWS_AS(translation_error_deg(Vector3d::Zero(), t), DegenerateInput);

  // Scale invariance.
  CHECK(translation_error_deg(3.0 * t, 0.25 * t) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("focal error") {
  CHECK(focal_error(500.0, 500.0) == 0.0);
  CHECK(focal_error(550.0, 500.0) == doctest::Approx(0.10).epsilon(1e-12));
}

TEST_CASE("stability metrics") {
  std::mt19937_64 rng(23);
  Pose gt;
  gt.R = random_rotation(rng);
  gt.t = Vector3d(0.1, -0.7, 0.7).normalized();

  SolutionCandidate exact;
  exact.focal_px = 640.0;
  exact.pose = gt;
  const StabilityMetrics zero = stability_metrics(exact, gt, 640.0);
  CHECK(zero.xi_f == 0.0);
  CHECK(zero.xi_R == 0.0);
  CHECK(zero.xi_t == 0.0);

  // Frobenius deviation equals the metric by definition.
  SolutionCandidate off = exact;
  off.pose.R = Eigen::AngleAxisd(0.03, Vector3d::UnitY()).toRotationMatrix() * gt.R;
  const double frob = (gt.R - off.pose.R).norm();
  CHECK(stability_metrics(off, gt, 640.0).xi_R == doctest::Approx(frob).epsilon(1e-12));

  // Sign-aligned translation metric: a mirrored solution scores zero.
  SolutionCandidate mirrored = exact;
  mirrored.pose.t = -gt.t;
  CHECK(stability_metrics(mirrored, gt, 640.0).xi_t == doctest::Approx(0.0).epsilon(1e-12));

  SolutionCandidate focal_off = exact;
  focal_off.focal_px = 704.0;
  CHECK(stability_metrics(focal_off, gt, 640.0).xi_f == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_SUITE_END();
