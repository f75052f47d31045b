#pragma once

// Robust estimation over many correspondences: sample two, run the minimal
// solver, score every candidate by Sampson distance in pixels, keep the
// model with the most inliers.

#include <cstdint>
#include <span>
#include <vector>

#include "acpose/solver.hpp"
#include "acpose/types.hpp"

namespace acpose {

struct RansacConfig {
  int max_iterations = 1000;
  double confidence = 0.999;       // adaptive termination target
  double inlier_threshold_px = 1.0;  // Sampson distance
  int min_inliers = 8;
  std::uint64_t seed = 0;
  SolveOptions solve_options;
};

struct RobustResult {
  SolutionCandidate best;
  std::vector<std::uint8_t> inlier_mask;
  int iterations_run = 0;
  int inlier_count = 0;
  double truncated_residual_sum = 0.0;  // sum of min(d, threshold); tie-break score
};

/// Fundamental matrix for raw pixel coordinates (principal point folded in),
/// unit Frobenius norm.
Matrix3d fundamental_from(const Pose& pose, double focal_px, const Vector2d& principal_point);

inline Matrix3d fundamental_from(const Pose& pose, const CameraIntrinsics& k) {
  return fundamental_from(pose, k.focal_px, k.principal_point);
}

/// First-order epipolar distance in pixels; zero iff the pair fits exactly.
double sampson_distance(const Matrix3d& f, const Vector2d& x_i, const Vector2d& x_j);

/// Deterministic for a fixed seed; iterations draw independent per-iteration
/// generators so the loop could run in any order. Throws
/// TooFewCorrespondences (< 2 inputs) and NoModelFound (no model reaching
/// min_inliers).
RobustResult estimate(std::span<const AffineCorrespondence> acs, const ImuAttitude& imu_i,
                      const ImuAttitude& imu_j, const Vector2d& principal_point,
                      const RansacConfig& cfg = {});

}  // namespace acpose
