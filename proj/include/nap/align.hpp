#pragma once

#include <span>
#include <string>
#include <vector>

#include "nap/kitti_io.hpp"
#include "nap/metrics.hpp"

namespace nap {

// Per-class dimension shift (target mean - source mean), meters.
struct SizeDelta {
  std::map<std::string, Dims> deltas;
};

// Per-class dimension ratio (target mean / source mean) for the
// multiplicative mode.
struct SizeScale {
  std::map<std::string, Dims> scales;
};

// Componentwise target - source over the shared class set. Classes present
// on only one side are skipped and reported through `skipped` when given.
SizeDelta compute_size_delta(const SizeStats& source, const SizeStats& target,
                             std::vector<std::string>* skipped = nullptr);

SizeScale compute_size_scale(const SizeStats& source, const SizeStats& target,
                             std::vector<std::string>* skipped = nullptr);

// Shifts covered classes' dims by the delta. Location and rotation stay
// put: the KITTI location is the bottom-face center, so the box keeps its
// ground anchor and grows around its footprint center and upward.
std::vector<BoxLabel> statnorm_labels(std::span<const BoxLabel> labels, const SizeDelta& delta);

std::vector<BoxLabel> statnorm_labels_scaled(std::span<const BoxLabel> labels,
                                             const SizeScale& scale);

// Rescales the points inside `original` by the per-axis dim ratios of
// adjusted/original, in box-local coordinates anchored at the bottom-face
// center. Points outside are untouched. The two boxes must share location
// and yaw.
PointCloud statnorm_points(const PointCloud& cloud, const Box3D& original,
                           const Box3D& adjusted);

// Uniform elevation binning over the observed [min, max] elevation range.
struct BeamModel {
  int n_beams = 0;
  double min_elev = 0, max_elev = 0;

  // Bin index, top edge inclusive; the whole range maps to 0 when degenerate.
  int bin(double elev) const;
};

BeamModel fit_beam_model(const PointCloud& cloud, int n_beams);

// elevation = arcsin(z / ||p||) per point, binned by fit_beam_model.
std::vector<int> estimate_beams(const PointCloud& cloud, int n_beams);

// Keeps points whose beam id is divisible by source_beams/target_beams;
// relative order preserved. The ratio must be integral.
PointCloud downsample_beams(const PointCloud& cloud, std::span<const int> beam_ids,
                            int source_beams, int target_beams);

// Sidecar ".beam" file: one u16-LE beam id per point.
std::vector<int> read_beam_sidecar(const std::filesystem::path& path,
                                   std::size_t expected_points);
void write_beam_sidecar(const std::filesystem::path& path, std::span<const int> beam_ids);

}  // namespace nap
