#include <doctest.h>

#include <sstream>

#include "acpose/dataset_io.hpp"
#include "test_support.hpp"

using namespace acpose;

namespace {

Dataset sample_dataset() {
  Dataset d;
  d.image_size = {641.0, 479.0};
  d.principal_point = {320.25, 239.75};
  d.focal_px = 537.123456789012345;
  d.imu_i = {0.012345678901234567, -0.1};
  d.imu_j = {-0.07, 0.033333333333333333};
  d.imu_true_i = ImuAttitude{0.012, -0.099};
  d.imu_true_j = ImuAttitude{-0.071, 0.0334};
  Pose gt;
  gt.R << 0.9998, -0.01, 0.02, 0.0099, 0.9999, 0.005, -0.02, -0.0049, 0.99978;
  gt.t = Vector3d(0.1, -0.2, 0.9).normalized();
  d.gt_pose = gt;
  for (int k = 0; k < 3; ++k) {
    AffineCorrespondence ac;
    ac.x_i = {100.5 + k, 200.25 - k};
    ac.x_j = {110.125 + 2 * k, 195.0};
    ac.A << 1.01, 0.02, -0.03, 0.99;
    d.acs.push_back(ac);
  }
  d.inlier_flags = {1, 0, -1};
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("dataset_io");

TEST_CASE("serialize-parse round trip is exact") {
  const Dataset d = sample_dataset();
  std::stringstream ss;
  write_dataset(ss, d);
  const Dataset back = read_dataset(ss);

  CHECK(back.image_size == d.image_size);
  CHECK(back.principal_point == d.principal_point);
  REQUIRE(back.focal_px.has_value());
  CHECK(*back.focal_px == *d.focal_px);
  CHECK(back.imu_i.roll == d.imu_i.roll);
  CHECK(back.imu_i.pitch == d.imu_i.pitch);
  CHECK(back.imu_true_j->pitch == d.imu_true_j->pitch);
  REQUIRE(back.gt_pose.has_value());
  CHECK(back.gt_pose->R == d.gt_pose->R);
  CHECK(back.gt_pose->t == d.gt_pose->t);
  REQUIRE(back.acs.size() == d.acs.size());
  for (std::size_t k = 0; k < d.acs.size(); ++k) {
    CHECK(back.acs[k].x_i == d.acs[k].x_i);
    CHECK(back.acs[k].x_j == d.acs[k].x_j);
    CHECK(back.acs[k].A == d.acs[k].A);
    CHECK(back.inlier_flags[k] == d.inlier_flags[k]);
  }

  // Serializing again yields the identical byte stream.
  std::stringstream ss2;
  write_dataset(ss2, back);
  std::stringstream ss3;
  write_dataset(ss3, d);
  CHECK(ss2.str() == ss3.str());
}

TEST_CASE("minimal dataset omits optional fields") {
  Dataset d;
  d.imu_i = {0.1, 0.2};
  d.imu_j = {0.3, 0.4};
  AffineCorrespondence ac;
  d.acs.push_back(ac);
  d.inlier_flags.push_back(-1);

  std::stringstream ss;
  write_dataset(ss, d);
  const std::string text = ss.str();
  CHECK(text.find("focal_px") == std::string::npos);
  CHECK(text.find("gt_rotation") == std::string::npos);
  CHECK(text.find("imu_true") == std::string::npos);

  const Dataset back = read_dataset(ss);
  CHECK(!back.focal_px.has_value());
  CHECK(!back.gt_pose.has_value());
  CHECK(back.acs.size() == 1);
  CHECK(back.inlier_flags[0] == -1);
}

TEST_CASE("unknown fields are rejected with the line number") {
  std::stringstream ss;
  ss << "acpose-dataset v1\n"
     << "image_size 640 480\n"
     << "bogus_field 1 2\n";
  try {
    read_dataset(ss);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("bogus_field") != std::string::npos);
  }
}

TEST_CASE("arity and number errors carry line numbers") {
  {
    std::stringstream ss;
    ss << "acpose-dataset v1\nprincipal_point 320\n";
    try {
      read_dataset(ss);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }
  {
    std::stringstream ss;
    ss << "acpose-dataset v1\nfocal_px notanumber\n";
    CHECK_THROWS_AS(read_dataset(ss), ParseError);
  }
  {
    std::stringstream ss;
    ss << "acpose-dataset v1\nac 1 2 3 4 5 6 7 8 2\n";  // bad inlier flag
    CHECK_THROWS_AS(read_dataset(ss), ParseError);
  }
}

TEST_CASE("missing or wrong header is rejected") {
  {
    std::stringstream ss;
    ss << "image_size 640 480\n";
    CHECK_THROWS_AS(read_dataset(ss), ParseError);
  }
  {
    std::stringstream ss;
    ss << "acpose-dataset v7\n";
    CHECK_THROWS_AS(read_dataset(ss), ParseError);
  }
  {
    std::stringstream ss;  // empty
    CHECK_THROWS_AS(read_dataset(ss), ParseError);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  std::stringstream ss;
  ss << "# comment\n\nacpose-dataset v1\n# another\nimage_size 640 480\n\n";
  const Dataset d = read_dataset(ss);
  CHECK(d.image_size.x() == 640.0);
}

TEST_CASE("scene export carries the solver-facing fields") {
  SceneConfig cfg;
  cfg.n_points = 4;
  cfg.seed = 8;
  cfg.noise.principal_px = 3.0;
  const SyntheticScene scene = generate_scene(cfg);
  const Dataset d = make_dataset(scene);
  CHECK(d.acs.size() == 4);
  CHECK(*d.focal_px == scene.gt_focal_px);
  CHECK(d.principal_point == scene.solver_principal_point);
  CHECK(d.imu_i.roll == scene.imu_i.roll);
  CHECK(d.imu_true_i->roll == scene.imu_true_i.roll);
  CHECK(d.gt_pose->R == scene.gt_pose.R);
}

TEST_SUITE_END();
