#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acpose {

template <typename T>
using Vector2 = Eigen::Matrix<T, 2, 1>;
template <typename T>
using Vector3 = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Matrix2 = Eigen::Matrix<T, 2, 2>;
template <typename T>
using Matrix3 = Eigen::Matrix<T, 3, 3>;

using Vector2d = Vector2<double>;
using Vector3d = Vector3<double>;
using Matrix2d = Matrix2<double>;
using Matrix3d = Matrix3<double>;

/// Pinhole intrinsics with square pixels and a known principal point.
/// The estimated unknown elsewhere in the library is the reciprocal of
/// focal_px; the public surface always reports pixels.
struct CameraIntrinsics {
  double focal_px = 0.0;
  Vector2d principal_point = Vector2d::Zero();
};

/// A point match plus the 2x2 Jacobian A of the local image-to-image
/// mapping around it (pixel coordinates in both views). A is invariant
/// under recentering, so principal-point handling never touches it.
struct AffineCorrespondence {
  Vector2d x_i = Vector2d::Zero();
  Vector2d x_j = Vector2d::Zero();
  Matrix2d A = Matrix2d::Identity();
};

/// Per-view roll (about z) and pitch (about x) in radians, as reported by
/// an IMU. The benchmark regime keeps both well inside (-pi/2, pi/2).
struct ImuAttitude {
  double roll = 0.0;
  double pitch = 0.0;
};

/// Relative pose mapping view-i coordinates into view j: X_j = R X_i + t.
/// t is a unit direction; the scale is unobservable from two views.
struct Pose {
  Matrix3d R = Matrix3d::Identity();
  Vector3d t = Vector3d::UnitX();
};

/// One (s, f, R, t) hypothesis produced by the minimal solver, with the
/// diagnostics used for ranking and degeneracy reporting.
struct SolutionCandidate {
  double s = 0.0;             // Cayley parameter of the aligned y-rotation
  double f_reciprocal = 0.0;  // 1 / focal_px
  double focal_px = 0.0;
  Pose pose;                  // in the original (unaligned) camera frames
  Vector3d t_aligned = Vector3d::Zero();  // unit translation between aligned frames
  double residual = 0.0;        // max_k |g_k(s, f)| over unit-max-coefficient g's
  double eigen_residual = 0.0;  // ||D L - s N L|| / ||L|| at the accepted eigenpair
  double nullspace_gap = 0.0;   // sigma_min / sigma_2nd_min of row-normalized M(s, f)
  bool cheirality_ok = false;
};

struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateNullspace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenFailure : std::runtime_error {
  EigenFailure(const std::string& what, double condition)
      : std::runtime_error(what), condition_estimate(condition) {}
  double condition_estimate = 0.0;
};

struct TooFewCorrespondences : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoModelFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a polynomial operation would write outside the fixed
/// coefficient grid.
struct DegreeOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(int line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  int line = 0;
};

}  // namespace acpose
