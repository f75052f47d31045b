#pragma once

// Line-oriented dataset format (version v1): a header block followed by one
// `ac` record per correspondence. Angles are radians in the file; floats are
// printed with 17 significant digits so parse(serialize(x)) == x.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acpose/synth.hpp"
#include "acpose/types.hpp"

namespace acpose {

struct Dataset {
  Vector2d image_size{640.0, 480.0};
  Vector2d principal_point{320.0, 240.0};
  std::optional<double> focal_px;  // ground truth, when known
  ImuAttitude imu_i, imu_j;        // solver-visible attitudes
  std::optional<ImuAttitude> imu_true_i, imu_true_j;
  std::optional<Pose> gt_pose;
  std::vector<AffineCorrespondence> acs;
  /// Per correspondence: 1 inlier, 0 outlier, -1 unknown. Same length as acs.
  std::vector<std::int8_t> inlier_flags;
};

/// Throws ParseError (with the offending line number) on unknown fields,
/// wrong arity, or malformed numbers.
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);  // throws std::runtime_error on I/O

void write_dataset(std::ostream& out, const Dataset& d);
void write_dataset_file(const std::string& path, const Dataset& d);

/// Dataset view of a synthetic scene (solver-visible fields + ground truth).
Dataset make_dataset(const SyntheticScene& scene);

}  // namespace acpose
