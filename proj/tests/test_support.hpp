#pragma once

// Shared helpers for the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "acpose/synth.hpp"
#include "acpose/types.hpp"

namespace acpose::testing {

/// Minimal two-correspondence scene.
inline SyntheticScene two_ac_scene(std::uint64_t seed,
                                   MotionPattern motion = MotionPattern::kRandom,
                                   const NoiseConfig& noise = {}) {
  SceneConfig cfg;
  cfg.n_points = 2;
  cfg.seed = seed;
  cfg.motion = motion;
  cfg.noise = noise;
  return generate_scene(cfg);
}

/// Ground-truth value of the solver's equilibrated f variable for a scene.
inline double internal_f(const SyntheticScene& scene, double f_scale) {
  return f_scale / scene.gt_focal_px;
}

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - w) + v[hi] * w;
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace acpose::testing
