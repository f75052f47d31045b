#include "acpose/synth.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "acpose/metrics.hpp"
#include "acpose/rotations.hpp"

namespace acpose {

namespace {

constexpr std::uint64_t kNoiseSeedSalt = 0x9e3779b97f4a7c15ull;

// M = rotation_y(psi) rotation_x(pitch) rotation_z(roll); valid for |pitch| < pi/2.
void decompose_yxz(const Matrix3d& m, double& psi, double& pitch, double& roll) {
  pitch = std::asin(std::clamp(m(1, 2), -1.0, 1.0));
  roll = std::atan2(-m(1, 0), m(1, 1));
  psi = std::atan2(m(0, 2), m(2, 2));
}

Vector2d project(const Vector3d& x, double focal_px, const Vector2d& pp) {
  return Vector2d(focal_px * x.x() / x.z() + pp.x(), focal_px * x.y() / x.z() + pp.y());
}

bool inside(const Vector2d& px, const Vector2d& image_size) {
  return px.x() >= 0.0 && px.x() <= image_size.x() && px.y() >= 0.0 &&
         px.y() <= image_size.y();
}

Vector2d apply_homography(const Matrix3d& h, const Vector2d& x) {
  const Vector3d y = h * Vector3d(x.x(), x.y(), 1.0);
  return y.head<2>() / y.z();
}

// Standard 4-point direct linear mapping.
Matrix3d fit_homography4(const std::array<Vector2d, 4>& src,
                         const std::array<Vector2d, 4>& dst) {
  Eigen::Matrix<double, 8, 9> a = Eigen::Matrix<double, 8, 9>::Zero();
  for (int k = 0; k < 4; ++k) {
    const double u = src[k].x(), v = src[k].y();
    const double up = dst[k].x(), vp = dst[k].y();
    a.row(2 * k) << u, v, 1, 0, 0, 0, -up * u, -up * v, -up;
    a.row(2 * k + 1) << 0, 0, 0, u, v, 1, -vp * u, -vp * v, -vp;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 9>> svd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Matrix3d out;
  out << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return out / out(2, 2);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double gauss(double sigma) { return std::normal_distribution<double>(0.0, sigma)(gen); }
};

Vector3d draw_direction(Rng& rng, MotionPattern motion) {
  switch (motion) {
    case MotionPattern::kSideways:
      return Vector3d(rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0, 0.0, 0.0);
    case MotionPattern::kForward:
      return Vector3d(0.0, 0.0, rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    case MotionPattern::kPlanar: {
      for (;;) {
        const Vector3d d(rng.uniform(-1.0, 1.0), 0.0, rng.uniform(-1.0, 1.0));
        if (d.norm() > 0.1) return d.normalized();
      }
    }
    case MotionPattern::kRandom:
    default: {
      for (;;) {
        const Vector3d d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                         rng.uniform(-1.0, 1.0));
        if (d.norm() > 0.1) return d.normalized();
      }
    }
  }
}

}  // namespace

Matrix3d local_homography(const Vector3d& point, const Vector3d& plane_normal,
                          const Matrix3d& R, const Vector3d& t_metric, double focal_px,
                          const Vector2d& principal_point) {
  const double d = plane_normal.dot(point);
  if (std::abs(d) <= 1e-12)
    throw DegenerateInput("local plane passes through the view-i camera center");
  const Vector3d center_j = -R.transpose() * t_metric;
  if (std::abs(plane_normal.dot(center_j) - d) <= 1e-12)
    throw DegenerateInput("local plane passes through the view-j camera center");

  Matrix3d k;
  k << focal_px, 0, principal_point.x(), 0, focal_px, principal_point.y(), 0, 0, 1;
  Matrix3d k_inv;
  k_inv << 1.0 / focal_px, 0, -principal_point.x() / focal_px,  //
      0, 1.0 / focal_px, -principal_point.y() / focal_px,       //
      0, 0, 1;
  return k * (R + t_metric * plane_normal.transpose() / d) * k_inv;
}

Matrix2d affine_from_homography(const Matrix3d& h, const Vector2d& x_i, const Vector2d& x_j) {
  const double b = x_i.x() * h(2, 0) + x_i.y() * h(2, 1) + h(2, 2);
  if (std::abs(b) <= 1e-12)
    throw DegenerateInput("homography denominator vanishes at the correspondence");
  Matrix2d a;
  a << (h(0, 0) - h(2, 0) * x_j.x()) / b, (h(0, 1) - h(2, 1) * x_j.x()) / b,
      (h(1, 0) - h(2, 0) * x_j.y()) / b, (h(1, 1) - h(2, 1) * x_j.y()) / b;
  return a;
}

SyntheticScene generate_scene(const SceneConfig& cfg) {
  Rng rng(cfg.seed);
  SyntheticScene scene;
  scene.config = cfg;
  scene.principal_point = cfg.principal_point;
  scene.solver_principal_point = cfg.principal_point;

  scene.gt_focal_px = cfg.focal_px > 0.0 ? cfg.focal_px : rng.uniform(100.0, 1000.0);

  const double range = cfg.rotation_range_deg * kDegToRad;
  const Matrix3d r_rel = rotation_x(rng.uniform(-range, range)) *
                         rotation_y(rng.uniform(-range, range)) *
                         rotation_z(rng.uniform(-range, range));

  scene.imu_true_i.roll = rng.uniform(-range, range);
  scene.imu_true_i.pitch = rng.uniform(-range, range);
  const Matrix3d r_imu_i = imu_alignment(scene.imu_true_i);

  // Solve R_rel = R_imu_j^T R_y(theta) R_imu_i for view j's attitude and the
  // aligned rotation angle.
  double psi, pitch_j, roll_j;
  decompose_yxz(r_imu_i * r_rel.transpose(), psi, pitch_j, roll_j);
  scene.imu_true_j.roll = roll_j;
  scene.imu_true_j.pitch = pitch_j;
  scene.gt_s = std::tan(-psi / 2.0);
  const Matrix3d r_imu_j = imu_alignment(scene.imu_true_j);

  const Vector3d direction = draw_direction(rng, cfg.motion);
  scene.t_metric = rng.uniform(cfg.baseline_min, cfg.baseline_max) * direction;
  scene.gt_pose.R = r_rel;
  scene.gt_pose.t = direction;
  scene.gt_t_aligned = r_imu_j * direction;

  scene.imu_i = scene.imu_true_i;
  scene.imu_j = scene.imu_true_j;

  scene.points.reserve(cfg.n_points);
  const double cos45 = std::cos(45.0 * kDegToRad);
  int attempts = 0;
  while (static_cast<int>(scene.points.size()) < cfg.n_points) {
    if (++attempts > 10000 * cfg.n_points)
      throw std::runtime_error("could not place scene points inside both images");
    const Vector3d x(rng.uniform(-cfg.cube_half_xy, cfg.cube_half_xy),
                     rng.uniform(-cfg.cube_half_xy, cfg.cube_half_xy),
                     rng.uniform(cfg.cube_z_min, cfg.cube_z_max));
    const Vector3d x_j = r_rel * x + scene.t_metric;
    if (x.z() <= 0.1 || x_j.z() <= 0.1) continue;
    const Vector2d px_i = project(x, scene.gt_focal_px, cfg.principal_point);
    const Vector2d px_j = project(x_j, scene.gt_focal_px, cfg.principal_point);
    if (!inside(px_i, cfg.image_size) || !inside(px_j, cfg.image_size)) continue;

    Vector3d normal;
    for (;;) {
      normal = Vector3d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                        rng.uniform(-1.0, 1.0));
      if (normal.norm() < 0.1) continue;
      normal.normalize();
      if (normal.z() < 0.0) normal = -normal;
      if (normal.z() < cos45) continue;
      // Keep the plane clearly away from both camera centers.
      const double d = normal.dot(x);
      if (std::abs(d) < 0.5) continue;
      if (std::abs(normal.dot(-r_rel.transpose() * scene.t_metric) - d) < 0.5) continue;
      break;
    }

    const Matrix3d h = local_homography(x, normal, r_rel, scene.t_metric,
                                        scene.gt_focal_px, cfg.principal_point);
    AffineCorrespondence ac;
    ac.x_i = px_i;
    ac.x_j = px_j;
    ac.A = affine_from_homography(h, px_i, px_j);

    scene.points.push_back(x);
    scene.plane_normals.push_back(normal);
    scene.homographies.push_back(h);
    scene.acs_true.push_back(ac);
  }
  scene.acs = scene.acs_true;

  const NoiseConfig& nz = cfg.noise;
  if (nz.image_px > 0.0 || nz.pitch_deg > 0.0 || nz.roll_deg > 0.0 || nz.principal_px > 0.0)
    return add_noise(scene, nz);
  return scene;
}

SyntheticScene add_noise(const SyntheticScene& scene, const NoiseConfig& noise) {
  SyntheticScene out = scene;
  out.config.noise = noise;
  Rng rng(scene.config.seed ^ kNoiseSeedSalt);

  if (noise.image_px > 0.0) {
    for (std::size_t k = 0; k < out.acs.size(); ++k) {
      AffineCorrespondence ac = scene.acs_true[k];
      ac.x_i.x() += rng.gauss(noise.image_px);
      ac.x_i.y() += rng.gauss(noise.image_px);
      ac.x_j.x() += rng.gauss(noise.image_px);
      ac.x_j.y() += rng.gauss(noise.image_px);

      if (noise.affine) {
        // Perturb the transferred patch corners and refit the local
        // homography before re-deriving the affinity.
        const Matrix3d& h = scene.homographies[k];
        const Vector2d c = scene.acs_true[k].x_i;
        const double r = noise.affine_patch_half_px;
        const std::array<Vector2d, 4> corners = {c + Vector2d(-r, -r), c + Vector2d(r, -r),
                                                 c + Vector2d(r, r), c + Vector2d(-r, r)};
        std::array<Vector2d, 4> transferred;
        for (int q = 0; q < 4; ++q) {
          transferred[q] = apply_homography(h, corners[q]);
          transferred[q].x() += rng.gauss(noise.image_px);
          transferred[q].y() += rng.gauss(noise.image_px);
        }
        const Matrix3d refit = fit_homography4(corners, transferred);
        ac.A = affine_from_homography(refit, ac.x_i, ac.x_j);
      }
      out.acs[k] = ac;
    }
  }

  if (noise.pitch_deg > 0.0) {
    out.imu_i.pitch = scene.imu_true_i.pitch + rng.gauss(noise.pitch_deg * kDegToRad);
    out.imu_j.pitch = scene.imu_true_j.pitch + rng.gauss(noise.pitch_deg * kDegToRad);
  }
  if (noise.roll_deg > 0.0) {
    out.imu_i.roll = scene.imu_true_i.roll + rng.gauss(noise.roll_deg * kDegToRad);
    out.imu_j.roll = scene.imu_true_j.roll + rng.gauss(noise.roll_deg * kDegToRad);
  }
  if (noise.principal_px > 0.0) {
    const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    out.solver_principal_point =
        scene.principal_point + noise.principal_px * Vector2d(std::cos(angle), std::sin(angle));
  }
  return out;
}

}  // namespace acpose
