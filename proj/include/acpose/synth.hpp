#pragma once

// Synthetic benchmark scenes: points on a desk-scale cube observed by two
// views with a known-vertical rotation model, affine correspondences derived
// from local plane homographies, and configurable image/IMU/principal-point
// noise.

#include <cstdint>
#include <vector>

#include "acpose/types.hpp"

namespace acpose {

enum class MotionPattern { kRandom, kPlanar, kSideways, kForward };

struct NoiseConfig {
  double image_px = 0.0;      // Gaussian sigma on every image point coordinate
  double pitch_deg = 0.0;     // Gaussian sigma on both views' reported pitch
  double roll_deg = 0.0;      // Gaussian sigma on both views' reported roll
  double principal_px = 0.0;  // offset magnitude on the solver-visible principal point
  bool affine = true;         // re-derive A from noise-perturbed patch corners
  /// Half side of the corner patch the affinity is refit from. Sets how hard
  /// image noise hits A (entry noise ~ sigma / patch size); 30 px matches the
  /// footprint of affine-covariant detectors.
  double affine_patch_half_px = 30.0;
};

struct SceneConfig {
  int n_points = 100;
  double cube_half_xy = 5.0;  // meters; X, Y in [-cube_half_xy, cube_half_xy]
  double cube_z_min = 5.0;
  double cube_z_max = 20.0;
  Vector2d image_size{640.0, 480.0};
  Vector2d principal_point{320.0, 240.0};
  double focal_px = 0.0;  // <= 0 draws from U[100, 1000]
  double rotation_range_deg = 10.0;
  double baseline_min = 0.5;  // meters
  double baseline_max = 1.5;
  MotionPattern motion = MotionPattern::kRandom;
  NoiseConfig noise;
  std::uint64_t seed = 0;
};

struct SyntheticScene {
  SceneConfig config;

  double gt_focal_px = 0.0;
  Pose gt_pose;               // R, unit t
  Vector3d t_metric = Vector3d::Zero();  // metric translation used for projection
  double gt_s = 0.0;
  Vector3d gt_t_aligned = Vector3d::Zero();

  ImuAttitude imu_true_i, imu_true_j;
  ImuAttitude imu_i, imu_j;  // solver-visible (noisy when configured)

  Vector2d principal_point;         // true, used for projection
  Vector2d solver_principal_point;  // handed to the solver

  std::vector<Vector3d> points;         // view-i camera frame
  std::vector<Vector3d> plane_normals;  // local patch planes
  std::vector<Matrix3d> homographies;   // pixel i -> pixel j, per point
  std::vector<AffineCorrespondence> acs_true;
  std::vector<AffineCorrespondence> acs;  // solver-visible (noisy when configured)
};

/// Deterministic for a fixed config (seed included). Points are resampled
/// until they project inside both images with positive depth.
SyntheticScene generate_scene(const SceneConfig& cfg);

/// Homography (pixel coordinates, view i to view j) induced by the plane
/// with the given normal through the 3D point. Throws DegenerateInput when
/// the plane passes through either camera center.
Matrix3d local_homography(const Vector3d& point, const Vector3d& plane_normal,
                          const Matrix3d& R, const Vector3d& t_metric, double focal_px,
                          const Vector2d& principal_point);

/// First-order affinity of the homography transfer at (x_i, x_j):
/// a11 = (h11 - h31 u_j)/b etc., b = u_i h31 + v_i h32 + h33.
/// Throws DegenerateInput when |b| <= 1e-12.
Matrix2d affine_from_homography(const Matrix3d& H, const Vector2d& x_i, const Vector2d& x_j);

/// Returns a copy of the scene with the given noise applied to the
/// solver-visible fields; ground truth stays untouched. Deterministic, keyed
/// off the scene's seed.
SyntheticScene add_noise(const SyntheticScene& scene, const NoiseConfig& noise);

}  // namespace acpose
