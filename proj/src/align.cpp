#include "nap/align.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "nap/error.hpp"

namespace nap {

namespace {

template <typename Fn>
std::map<std::string, Dims> combine_shared(const SizeStats& source, const SizeStats& target,
                                           std::vector<std::string>* skipped, Fn&& fn) {
  std::map<std::string, Dims> out;
  for (const auto& [cls, src] : source.classes) {
    const auto it = target.classes.find(cls);
    if (it == target.classes.end()) {
      if (skipped) skipped->push_back(cls);
      continue;
    }
    out[cls] = fn(src, it->second);
  }
  if (skipped)
    for (const auto& [cls, tgt] : target.classes)
      if (!source.classes.count(cls)) skipped->push_back(cls);
  if (out.empty()) throw error("size stats share no classes");
  return out;
}

}  // namespace

SizeDelta compute_size_delta(const SizeStats& source, const SizeStats& target,
                             std::vector<std::string>* skipped) {
  SizeDelta delta;
  delta.deltas = combine_shared(source, target, skipped, [](const Dims& s, const Dims& t) {
    return Dims{t.l - s.l, t.w - s.w, t.h - s.h};
  });
  return delta;
}

SizeScale compute_size_scale(const SizeStats& source, const SizeStats& target,
                             std::vector<std::string>* skipped) {
  SizeScale scale;
  scale.scales = combine_shared(source, target, skipped, [](const Dims& s, const Dims& t) {
    return Dims{t.l / s.l, t.w / s.w, t.h / s.h};
  });
  return scale;
}

namespace {

void check_positive_dims(const BoxLabel& b, std::size_t index) {
  if (b.l <= 0 || b.w <= 0 || b.h <= 0)
    throw error("statnorm: adjusted dimensions non-positive for box " + std::to_string(index) +
                " (" + b.class_name + ")");
}

}  // namespace

std::vector<BoxLabel> statnorm_labels(std::span<const BoxLabel> labels, const SizeDelta& delta) {
  std::vector<BoxLabel> out(labels.begin(), labels.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto it = delta.deltas.find(out[i].class_name);
    if (it == delta.deltas.end()) continue;
    out[i].l += it->second.l;
    out[i].w += it->second.w;
    out[i].h += it->second.h;
    check_positive_dims(out[i], i);
  }
  return out;
}

std::vector<BoxLabel> statnorm_labels_scaled(std::span<const BoxLabel> labels,
                                             const SizeScale& scale) {
  std::vector<BoxLabel> out(labels.begin(), labels.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto it = scale.scales.find(out[i].class_name);
    if (it == scale.scales.end()) continue;
    out[i].l *= it->second.l;
    out[i].w *= it->second.w;
    out[i].h *= it->second.h;
    check_positive_dims(out[i], i);
  }
  return out;
}

PointCloud statnorm_points(const PointCloud& cloud, const Box3D& original,
                           const Box3D& adjusted) {
  constexpr double kTol = 1e-9;
  if (std::abs(original.x - adjusted.x) > kTol || std::abs(original.y - adjusted.y) > kTol ||
      std::abs(original.z - adjusted.z) > kTol || std::abs(original.yaw - adjusted.yaw) > kTol)
    throw error("statnorm_points: boxes must share location and yaw");
  if (original.l <= 0 || original.w <= 0 || original.h <= 0)
    throw error("statnorm_points: degenerate original box dims");

  const double c = std::cos(original.yaw);
  const double s = std::sin(original.yaw);
  const double sl = adjusted.l / original.l;
  const double sw = adjusted.w / original.w;
  const double sh = adjusted.h / original.h;

  PointCloud out = cloud;
  for (auto& p : out.points) {
    const double dx = static_cast<double>(p.x) - original.x;
    const double dz = static_cast<double>(p.z) - original.z;
    const double dy = static_cast<double>(p.y) - original.y;  // in [-h, 0] inside
    const double u = dx * c - dz * s;
    const double v = dx * s + dz * c;
    const bool inside = std::abs(u) <= original.l / 2 && std::abs(v) <= original.w / 2 &&
                        dy >= -original.h && dy <= 0.0;
    if (!inside) continue;
    const double u2 = u * sl;
    const double v2 = v * sw;
    const double dy2 = dy * sh;
    p.x = static_cast<float>(original.x + u2 * c + v2 * s);
    p.z = static_cast<float>(original.z - u2 * s + v2 * c);
    p.y = static_cast<float>(original.y + dy2);
  }
  return out;
}

int BeamModel::bin(double elev) const {
  if (max_elev <= min_elev) return 0;
  const double t = (elev - min_elev) / (max_elev - min_elev);
  const int id = static_cast<int>(t * n_beams);
  return std::clamp(id, 0, n_beams - 1);
}

BeamModel fit_beam_model(const PointCloud& cloud, int n_beams) {
  if (n_beams < 2) throw error("beam model: n_beams must be >= 2");
  if (cloud.empty()) throw error("beam model: empty cloud");
  BeamModel model;
  model.n_beams = n_beams;
  bool first = true;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    const double r = std::sqrt(double(p.x) * p.x + double(p.y) * p.y + double(p.z) * p.z);
    if (r == 0.0) throw error("beam model: zero-norm point at index " + std::to_string(i));
    const double elev = std::asin(static_cast<double>(p.z) / r);
    if (first) {
      model.min_elev = model.max_elev = elev;
      first = false;
    } else {
      model.min_elev = std::min(model.min_elev, elev);
      model.max_elev = std::max(model.max_elev, elev);
    }
  }
  return model;
}

std::vector<int> estimate_beams(const PointCloud& cloud, int n_beams) {
  const BeamModel model = fit_beam_model(cloud, n_beams);
  std::vector<int> ids(cloud.points.size());
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    const double r = std::sqrt(double(p.x) * p.x + double(p.y) * p.y + double(p.z) * p.z);
    const double elev = std::asin(static_cast<double>(p.z) / r);
    ids[i] = model.bin(elev);
  }
  return ids;
}

PointCloud downsample_beams(const PointCloud& cloud, std::span<const int> beam_ids,
                            int source_beams, int target_beams) {
  if (beam_ids.size() != cloud.points.size())
    throw error("downsample_beams: beam id count does not match point count");
  if (source_beams < 1 || target_beams < 1)
    throw error("downsample_beams: beam counts must be >= 1");
  if (target_beams > source_beams)
    throw error("downsample_beams: target beams exceed source beams (upsampling unsupported)");
  if (source_beams % target_beams != 0) {
    // Suggest the closest divisor of source_beams.
    int best = 1;
    for (int d = 1; d <= source_beams; ++d)
      if (source_beams % d == 0 &&
          std::abs(d - target_beams) < std::abs(best - target_beams))
        best = d;
    throw error("downsample_beams: " + std::to_string(source_beams) + " -> " +
                std::to_string(target_beams) +
                " is not an integer beam ratio; nearest supported target is " +
                std::to_string(best));
  }
  const int ratio = source_beams / target_beams;
  PointCloud out;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const int id = beam_ids[i];
    if (id < 0 || id >= source_beams)
      throw error("downsample_beams: beam id " + std::to_string(id) + " at point " +
                  std::to_string(i) + " outside [0, " + std::to_string(source_beams) + ")");
    if (id % ratio == 0) out.points.push_back(cloud.points[i]);
  }
  return out;
}

std::vector<int> read_beam_sidecar(const std::filesystem::path& path,
                                   std::size_t expected_points) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() != expected_points * 2)
    throw error(path.string() + ": expected " + std::to_string(expected_points * 2) +
                " bytes (u16 per point), got " + std::to_string(bytes.size()));
  std::vector<int> ids(expected_points);
  for (std::size_t i = 0; i < expected_points; ++i)
    ids[i] = bytes[2 * i] | (int(bytes[2 * i + 1]) << 8);
  return ids;
}

void write_beam_sidecar(const std::filesystem::path& path, std::span<const int> beam_ids) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write " + path.string());
  for (int id : beam_ids) {
    if (id < 0 || id > 0xffff) throw error("beam sidecar: id out of u16 range");
    const char b[2] = {static_cast<char>(id & 0xff), static_cast<char>((id >> 8) & 0xff)};
    out.write(b, 2);
  }
  if (!out) throw error("write failed: " + path.string());
}

}  // namespace nap
