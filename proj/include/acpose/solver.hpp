#pragma once

// End-to-end minimal solver: two affine correspondences plus per-view
// vertical directions in, ranked pose/focal candidates out.

#include <utility>
#include <vector>

#include "acpose/types.hpp"

namespace acpose {

struct SolveOptions {
  /// Also solve with the roles of the two correspondences swapped and merge
  /// the candidate sets (one extra 36x36 eigen-solve). Candidate residuals
  /// then cover both systems, which is what lets the ranking separate the
  /// geometric root from spurious roots of a single 4-row system.
  bool run_both_row_assignments = true;
  /// Eigenvector structure tolerance; loose enough for pixel-level noise.
  double tol_consistency = 1e-4;
  /// Plausibility window on the recovered focal length.
  double min_focal_px = 50.0;
  double max_focal_px = 10000.0;
  /// Drop candidates whose triangulated depths cannot be made positive.
  bool require_cheirality = true;
  /// Gauss-Newton touch-up of each (s, f) root on the determinant
  /// polynomials; a few iterations, guarded against leaving the root basin.
  bool polish_roots = true;
};

/// Solves the minimal problem. Candidates come back sorted by polynomial
/// residual (cheirality and eigen-residual break ties).
/// Throws DegenerateInput for duplicate/unusable correspondences,
/// DegenerateNullspace when every root has a collapsed translation null
/// space, EigenFailure if the QZ iteration fails.
std::vector<SolutionCandidate> solve_2ac(const AffineCorrespondence& ac_a,
                                         const AffineCorrespondence& ac_b,
                                         const ImuAttitude& imu_i, const ImuAttitude& imu_j,
                                         const Vector2d& principal_point,
                                         const SolveOptions& opts = {});

/// Signed depths of the midpoint-triangulated point in both camera frames.
/// t may be unit or metric; depths scale accordingly. Throws DegenerateInput
/// when the two rays are parallel within 1e-6 rad.
std::pair<double, double> triangulate_depth_signs(const Matrix3d& R, const Vector3d& t,
                                                  double focal_px,
                                                  const AffineCorrespondence& ac,
                                                  const Vector2d& principal_point);

}  // namespace acpose
