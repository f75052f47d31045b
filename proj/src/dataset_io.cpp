#include "acpose/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace acpose {

namespace {

constexpr const char* kMagic = "acpose-dataset";
constexpr const char* kVersion = "v1";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& tok, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "malformed number '" + tok + "'");
  return v;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string tok;
  while (ss >> tok) toks.push_back(tok);
  return toks;
}

void expect_arity(const std::vector<std::string>& toks, std::size_t values, int line) {
  if (toks.size() != values + 1)
    throw ParseError(line, "field '" + toks[0] + "' expects " + std::to_string(values) +
                               " values, got " + std::to_string(toks.size() - 1));
}

}  // namespace

Dataset read_dataset(std::istream& in) {
  Dataset d;
  std::string line;
  int line_no = 0;
  bool saw_magic = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;

    if (!saw_magic) {
      if (toks.size() != 2 || toks[0] != kMagic)
        throw ParseError(line_no, "expected '" + std::string(kMagic) + " " + kVersion + "'");
      if (toks[1] != kVersion)
        throw ParseError(line_no, "unsupported version '" + toks[1] + "'");
      saw_magic = true;
      continue;
    }

    const std::string& key = toks[0];
    if (key == "image_size") {
      expect_arity(toks, 2, line_no);
      d.image_size = {to_double(toks[1], line_no), to_double(toks[2], line_no)};
    } else if (key == "principal_point") {
      expect_arity(toks, 2, line_no);
      d.principal_point = {to_double(toks[1], line_no), to_double(toks[2], line_no)};
    } else if (key == "focal_px") {
      expect_arity(toks, 1, line_no);
      d.focal_px = to_double(toks[1], line_no);
    } else if (key == "imu_i" || key == "imu_j" || key == "imu_true_i" ||
               key == "imu_true_j") {
      expect_arity(toks, 2, line_no);
      const ImuAttitude att{to_double(toks[1], line_no), to_double(toks[2], line_no)};
      if (key == "imu_i")
        d.imu_i = att;
      else if (key == "imu_j")
        d.imu_j = att;
      else if (key == "imu_true_i")
        d.imu_true_i = att;
      else
        d.imu_true_j = att;
    } else if (key == "gt_rotation") {
      expect_arity(toks, 9, line_no);
      Pose pose = d.gt_pose.value_or(Pose{});
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          pose.R(r, c) = to_double(toks[1 + 3 * r + c], line_no);
      d.gt_pose = pose;
    } else if (key == "gt_translation") {
      expect_arity(toks, 3, line_no);
      Pose pose = d.gt_pose.value_or(Pose{});
      pose.t = {to_double(toks[1], line_no), to_double(toks[2], line_no),
                to_double(toks[3], line_no)};
      d.gt_pose = pose;
    } else if (key == "ac") {
      if (toks.size() != 9 && toks.size() != 10)
        throw ParseError(line_no, "field 'ac' expects 8 values plus an optional inlier flag");
      AffineCorrespondence ac;
      ac.x_i = {to_double(toks[1], line_no), to_double(toks[2], line_no)};
      ac.x_j = {to_double(toks[3], line_no), to_double(toks[4], line_no)};
      ac.A << to_double(toks[5], line_no), to_double(toks[6], line_no),
          to_double(toks[7], line_no), to_double(toks[8], line_no);
      std::int8_t flag = -1;
      if (toks.size() == 10) {
        if (toks[9] == "0")
          flag = 0;
        else if (toks[9] == "1")
          flag = 1;
        else
          throw ParseError(line_no, "inlier flag must be 0 or 1");
      }
      d.acs.push_back(ac);
      d.inlier_flags.push_back(flag);
    } else {
      throw ParseError(line_no, "unknown field '" + key + "'");
    }
  }
  if (!saw_magic) throw ParseError(line_no, "missing dataset header");
  return d;
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file '" + path + "'");
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& d) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "image_size " << fmt(d.image_size.x()) << ' ' << fmt(d.image_size.y()) << '\n';
  out << "principal_point " << fmt(d.principal_point.x()) << ' '
      << fmt(d.principal_point.y()) << '\n';
  if (d.focal_px) out << "focal_px " << fmt(*d.focal_px) << '\n';
  out << "imu_i " << fmt(d.imu_i.roll) << ' ' << fmt(d.imu_i.pitch) << '\n';
  out << "imu_j " << fmt(d.imu_j.roll) << ' ' << fmt(d.imu_j.pitch) << '\n';
  if (d.imu_true_i)
    out << "imu_true_i " << fmt(d.imu_true_i->roll) << ' ' << fmt(d.imu_true_i->pitch)
        << '\n';
  if (d.imu_true_j)
    out << "imu_true_j " << fmt(d.imu_true_j->roll) << ' ' << fmt(d.imu_true_j->pitch)
        << '\n';
  if (d.gt_pose) {
    out << "gt_rotation";
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << ' ' << fmt(d.gt_pose->R(r, c));
    out << '\n';
    out << "gt_translation " << fmt(d.gt_pose->t.x()) << ' ' << fmt(d.gt_pose->t.y()) << ' '
        << fmt(d.gt_pose->t.z()) << '\n';
  }
  for (std::size_t k = 0; k < d.acs.size(); ++k) {
    const auto& ac = d.acs[k];
    out << "ac " << fmt(ac.x_i.x()) << ' ' << fmt(ac.x_i.y()) << ' ' << fmt(ac.x_j.x())
        << ' ' << fmt(ac.x_j.y()) << ' ' << fmt(ac.A(0, 0)) << ' ' << fmt(ac.A(0, 1)) << ' '
        << fmt(ac.A(1, 0)) << ' ' << fmt(ac.A(1, 1));
    const std::int8_t flag = k < d.inlier_flags.size() ? d.inlier_flags[k] : -1;
    if (flag >= 0) out << ' ' << int(flag);
    out << '\n';
  }
}

void write_dataset_file(const std::string& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_dataset(out, d);
  if (!out) throw std::runtime_error("failed writing dataset to '" + path + "'");
}

Dataset make_dataset(const SyntheticScene& scene) {
  Dataset d;
  d.image_size = scene.config.image_size;
  d.principal_point = scene.solver_principal_point;
  d.focal_px = scene.gt_focal_px;
  d.imu_i = scene.imu_i;
  d.imu_j = scene.imu_j;
  d.imu_true_i = scene.imu_true_i;
  d.imu_true_j = scene.imu_true_j;
  d.gt_pose = scene.gt_pose;
  d.acs = scene.acs;
  d.inlier_flags.assign(scene.acs.size(), -1);
  return d;
}

}  // namespace acpose
