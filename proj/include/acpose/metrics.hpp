#pragma once

// Error and stability metrics for pose/focal estimates.

#include <algorithm>
#include <cmath>

#include "acpose/types.hpp"

namespace acpose {

inline constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

/// arccos((trace(R_gt R^T) - 1) / 2) in degrees, argument clamped.
inline double rotation_error_deg(const Matrix3d& r, const Matrix3d& r_gt) {
  const double c = std::clamp(((r_gt * r.transpose()).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * kRadToDeg;
}

/// Angle between translation directions in degrees.
inline double translation_error_deg(const Vector3d& t, const Vector3d& t_gt) {
  const double nt = t.norm(), ng = t_gt.norm();
  if (nt == 0.0 || ng == 0.0) throw DegenerateInput("zero translation vector");
  const double c = std::clamp(t.dot(t_gt) / (nt * ng), -1.0, 1.0);
  return std::acos(c) * kRadToDeg;
}

/// min(theta, 180 - theta), for callers that have not resolved the mirror
/// ambiguity.
inline double translation_error_deg_sign_agnostic(const Vector3d& t, const Vector3d& t_gt) {
  const double e = translation_error_deg(t, t_gt);
  return std::min(e, 180.0 - e);
}

inline double focal_error(double f_est_px, double f_gt_px) {
  return std::abs(f_gt_px - f_est_px) / f_gt_px;
}

struct StabilityMetrics {
  double xi_f = 0.0;  // |f_gt - f| / f_gt
  double xi_R = 0.0;  // ||R_gt - R||_F
  double xi_t = 0.0;  // ||t_gt/|t_gt| - t/|t|||_2, signs aligned first
};

inline StabilityMetrics stability_metrics(const SolutionCandidate& cand, const Pose& gt_pose,
                                          double gt_focal_px) {
  StabilityMetrics out;
  out.xi_f = focal_error(cand.focal_px, gt_focal_px);
  out.xi_R = (gt_pose.R - cand.pose.R).norm();
  const Vector3d u = gt_pose.t.normalized();
  const Vector3d v = cand.pose.t.normalized();
  out.xi_t = std::min((u - v).norm(), (u + v).norm());
  return out;
}

struct ErrorReport {
  double rot_err_deg = 0.0;
  double trans_err_deg = 0.0;
  double focal_rel_err = 0.0;
  StabilityMetrics stability;
};

inline ErrorReport error_report(const SolutionCandidate& cand, const Pose& gt_pose,
                                double gt_focal_px) {
  ErrorReport out;
  out.rot_err_deg = rotation_error_deg(cand.pose.R, gt_pose.R);
  out.trans_err_deg = translation_error_deg(cand.pose.t, gt_pose.t);
  out.focal_rel_err = focal_error(cand.focal_px, gt_focal_px);
  out.stability = stability_metrics(cand, gt_pose, gt_focal_px);
  return out;
}

}  // namespace acpose
