#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nap/kitti_io.hpp"

namespace nap {

// Evaluation-side box in the KITTI camera frame: location is the
// bottom-face center with y pointing down, so the vertical extent is
// [y - h, y]. At yaw = 0 the length axis aligns with camera x.
struct Box3D {
  std::string class_name;
  double h = 0, w = 0, l = 0;
  double x = 0, y = 0, z = 0;
  double yaw = 0;
  std::optional<double> score;
};

Box3D to_box3d(const BoxLabel& label);

// The box footprint in the x-z plane as 4 corners, counter-clockwise.
std::array<std::array<double, 2>, 4> bev_corners(const Box3D& box);

// IoU of the yaw-rotated footprints, by half-plane clipping + shoelace.
double iou_bev(const Box3D& a, const Box3D& b);

// BEV intersection area times vertical interval overlap over volume union.
double iou_3d(const Box3D& a, const Box3D& b);

// Boundary-inclusive: points exactly on a face count. Cloud and box must
// share a frame.
std::size_t points_in_box(const PointCloud& cloud, const Box3D& box);

// Keeps GT boxes containing at least min_points cloud points (boxes with
// <min_points filtered out).
std::vector<Box3D> filter_gt_min_points(std::span<const Box3D> gts, const PointCloud& cloud,
                                        std::size_t min_points = 50);

struct MatchResult {
  std::vector<bool> det_is_tp;       // per detection, input order
  std::vector<int> det_matched_gt;   // GT index or -1, input order
  std::vector<bool> gt_matched;      // per GT
};

using IouFn = std::function<double(const Box3D&, const Box3D&)>;

// Greedy per-frame matching: detections in descending score (ties keep
// input order) each take the unmatched GT with highest IoU if it reaches
// the threshold.
MatchResult match_detections(std::span<const Box3D> dets, std::span<const Box3D> gts,
                             const IouFn& iou_fn, double threshold);

enum class ApInterpolation { r40, r11 };

struct PrSample {
  double recall = 0, precision = 0, score = 0;
};

// Average precision in [0,100] over globally score-sorted detections.
// r40: precision sampled at recall {1/40..40/40} as the max precision at
// recall >= r. r11 uses {0, 0.1, .., 1.0}.
double average_precision(std::vector<std::pair<double, bool>> scored_tp, std::size_t n_gt,
                         ApInterpolation interp = ApInterpolation::r40,
                         std::vector<PrSample>* curve = nullptr);

struct ClassEval {
  double ap = 0.0;
  std::size_t n_gt = 0, n_det = 0, n_tp = 0;
  std::vector<PrSample> curve;
};

struct EvalFrame {
  std::vector<Box3D> gts;
  std::vector<Box3D> dets;
  const PointCloud* cloud = nullptr;  // optional, enables the min-points filter
};

// Full KITTI-protocol evaluation of one class at one threshold across
// frames. min_points = 0 disables the GT point filter.
ClassEval evaluate_class(std::span<const EvalFrame> frames, const std::string& class_name,
                         double iou_threshold, std::size_t min_points = 0,
                         ApInterpolation interp = ApInterpolation::r40);

}  // namespace nap
