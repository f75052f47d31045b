#pragma once

// Rotation constructions used throughout the solver: elementary axis
// rotations, the IMU vertical-alignment rotation, the Cayley form of the
// aligned y-rotation, and composition back to unaligned camera frames.

#include <cassert>
#include <cmath>
#include <utility>

#include "acpose/types.hpp"

namespace acpose {

/// Skew-symmetric S with S w = v x w.
template <typename T>
Matrix3<T> cross_matrix(const Vector3<T>& v) {
  Matrix3<T> s;
  s << T(0), -v.z(), v.y(),  //
      v.z(), T(0), -v.x(),   //
      -v.y(), v.x(), T(0);
  return s;
}

template <typename T>
Matrix3<T> rotation_x(T a) {
  const T c = std::cos(a), s = std::sin(a);
  Matrix3<T> m;
  m << T(1), T(0), T(0),  //
      T(0), c, s,         //
      T(0), -s, c;
  return m;
}

template <typename T>
Matrix3<T> rotation_y(T a) {
  const T c = std::cos(a), s = std::sin(a);
  Matrix3<T> m;
  m << c, T(0), s,     //
      T(0), T(1), T(0),  //
      -s, T(0), c;
  return m;
}

template <typename T>
Matrix3<T> rotation_z(T a) {
  const T c = std::cos(a), s = std::sin(a);
  Matrix3<T> m;
  m << c, s, T(0),   //
      -s, c, T(0),   //
      T(0), T(0), T(1);
  return m;
}

/// R_imu = R_x(pitch) R_z(roll): maps camera coordinates into the
/// gravity-aligned frame whose +y axis is the vertical direction.
template <typename T>
Matrix3<T> imu_alignment(T roll, T pitch) {
  return rotation_x(pitch) * rotation_z(roll);
}

inline Matrix3d imu_alignment(const ImuAttitude& att) {
  return imu_alignment(att.roll, att.pitch);
}

/// Rational (Cayley) form of the aligned y-rotation: numerator/denominator
/// equals rotation_y(2 atan(s)). Keeping numerator and denominator apart
/// lets the constraint builder clear the denominator exactly.
template <typename T>
struct CayleyRy {
  Matrix3<T> numerator;
  T denominator;

  Matrix3<T> rotation() const { return numerator / denominator; }
};

template <typename T>
CayleyRy<T> cayley_ry(T s) {
  const T s2 = s * s;
  Matrix3<T> num;
  num << T(1) - s2, T(0), T(2) * s,  //
      T(0), T(1) + s2, T(0),         //
      T(-2) * s, T(0), T(1) - s2;
  return {num, T(1) + s2};
}

/// Assembles the relative pose in the original camera frames from the
/// aligned-frame parameters: R = R_imu_j^T R_y(s) R_imu_i, t = R_imu_j^T t_aligned.
/// Requires ||t_aligned|| = 1.
inline Pose compose_relative_pose(double s, const Vector3d& t_aligned,
                                  const ImuAttitude& imu_i, const ImuAttitude& imu_j) {
  const Matrix3d r_i = imu_alignment(imu_i);
  const Matrix3d r_j = imu_alignment(imu_j);
  Pose pose;
  pose.R = r_j.transpose() * cayley_ry(s).rotation() * r_i;
  pose.t = r_j.transpose() * t_aligned;
  // Orthonormality holds by construction; checked in debug builds only.
  assert((pose.R * pose.R.transpose() - Matrix3d::Identity()).norm() < 1e-9);
  assert(std::abs(pose.t.norm() - 1.0) < 1e-12);
  return pose;
}

/// Inverse of compose_relative_pose for |theta| < pi: recovers (s, t_aligned).
inline std::pair<double, Vector3d> decompose_relative_pose(const Pose& pose,
                                                           const ImuAttitude& imu_i,
                                                           const ImuAttitude& imu_j) {
  const Matrix3d r_i = imu_alignment(imu_i);
  const Matrix3d r_j = imu_alignment(imu_j);
  const Matrix3d ry = r_j * pose.R * r_i.transpose();
  const double theta = std::atan2(ry(0, 2), ry(0, 0));
  return {std::tan(theta / 2.0), r_j * pose.t};
}

/// Aligned essential matrix [t_aligned]x R_y(s) with the (1 + s^2)
/// denominator cleared; the scale is irrelevant to epipolar residuals.
inline Matrix3d essential_from(double s, const Vector3d& t_aligned) {
  return cross_matrix(t_aligned) * cayley_ry(s).numerator;
}

}  // namespace acpose
