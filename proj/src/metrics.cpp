#include "nap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nap/error.hpp"

namespace nap {

Box3D to_box3d(const BoxLabel& label) {
  Box3D b;
  b.class_name = label.class_name;
  b.h = label.h;
  b.w = label.w;
  b.l = label.l;
  b.x = label.x;
  b.y = label.y;
  b.z = label.z;
  b.yaw = label.rotation_y;
  b.score = label.score;
  return b;
}

std::array<std::array<double, 2>, 4> bev_corners(const Box3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = box.l / 2;
  const double hw = box.w / 2;
  // Local (u = length axis, v = width axis) corners, counter-clockwise.
  const double local[4][2] = {{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}};
  std::array<std::array<double, 2>, 4> out;
  for (int i = 0; i < 4; ++i) {
    const double u = local[i][0];
    const double v = local[i][1];
    out[i] = {box.x + u * c + v * s, box.z - u * s + v * c};
  }
  return out;
}

namespace {

using Vec2 = std::array<double, 2>;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double shoelace(const std::vector<Vec2>& poly) {
  if (poly.size() < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    acc += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(acc) / 2.0;
}

// Clips `subject` by the half-plane to the left of edge a->b (inclusive).
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& subject, const Vec2& a,
                                 const Vec2& b) {
  std::vector<Vec2> out;
  out.reserve(subject.size() + 1);
  for (std::size_t i = 0; i < subject.size(); ++i) {
    const Vec2& cur = subject[i];
    const Vec2& nxt = subject[(i + 1) % subject.size()];
    const double dc = cross(a, b, cur);
    const double dn = cross(a, b, nxt);
    if (dc >= 0) out.push_back(cur);
    if ((dc > 0 && dn < 0) || (dc < 0 && dn > 0)) {
      const double t = dc / (dc - dn);
      out.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
    }
  }
  return out;
}

std::vector<Vec2> dedup_vertices(const std::vector<Vec2>& poly) {
  constexpr double kTol = 1e-9;
  std::vector<Vec2> out;
  for (const Vec2& p : poly) {
    if (!out.empty() && std::abs(p[0] - out.back()[0]) <= kTol &&
        std::abs(p[1] - out.back()[1]) <= kTol)
      continue;
    out.push_back(p);
  }
  while (out.size() > 1 && std::abs(out.front()[0] - out.back()[0]) <= kTol &&
         std::abs(out.front()[1] - out.back()[1]) <= kTol)
    out.pop_back();
  return out;
}

void check_box(const Box3D& box) {
  if (box.l <= 0 || box.w <= 0 || box.h <= 0)
    throw error("degenerate box: non-positive dimensions");
}

double bev_intersection_area(const Box3D& a, const Box3D& b) {
  const auto ca = bev_corners(a);
  const auto cb = bev_corners(b);
  std::vector<Vec2> poly(ca.begin(), ca.end());
  for (int i = 0; i < 4 && !poly.empty(); ++i)
    poly = clip_halfplane(poly, cb[i], cb[(i + 1) % 4]);
  return shoelace(dedup_vertices(poly));
}

double bev_area(const Box3D& box) {
  const auto c = bev_corners(box);
  return shoelace(std::vector<Vec2>(c.begin(), c.end()));
}

}  // namespace

double iou_bev(const Box3D& a, const Box3D& b) {
  check_box(a);
  check_box(b);
  const double inter = bev_intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = bev_area(a) + bev_area(b) - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_3d(const Box3D& a, const Box3D& b) {
  check_box(a);
  check_box(b);
  const double y_overlap = std::min(a.y, b.y) - std::max(a.y - a.h, b.y - b.h);
  if (y_overlap <= 0.0) return 0.0;
  const double inter_area = bev_intersection_area(a, b);
  if (inter_area <= 0.0) return 0.0;
  const double inter_vol = inter_area * y_overlap;
  const double vol_a = bev_area(a) * a.h;
  const double vol_b = bev_area(b) * b.h;
  return std::clamp(inter_vol / (vol_a + vol_b - inter_vol), 0.0, 1.0);
}

std::size_t points_in_box(const PointCloud& cloud, const Box3D& box) {
  check_box(box);
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  std::size_t count = 0;
  for (const auto& p : cloud.points) {
    const double dx = static_cast<double>(p.x) - box.x;
    const double dz = static_cast<double>(p.z) - box.z;
    const double u = dx * c - dz * s;
    const double v = dx * s + dz * c;
    if (std::abs(u) <= box.l / 2 && std::abs(v) <= box.w / 2 && p.y >= box.y - box.h &&
        p.y <= box.y)
      ++count;
  }
  return count;
}

std::vector<Box3D> filter_gt_min_points(std::span<const Box3D> gts, const PointCloud& cloud,
                                        std::size_t min_points) {
  std::vector<Box3D> kept;
  for (const auto& gt : gts)
    if (points_in_box(cloud, gt) >= min_points) kept.push_back(gt);
  return kept;
}

MatchResult match_detections(std::span<const Box3D> dets, std::span<const Box3D> gts,
                             const IouFn& iou_fn, double threshold) {
  MatchResult res;
  res.det_is_tp.assign(dets.size(), false);
  res.det_matched_gt.assign(dets.size(), -1);
  res.gt_matched.assign(gts.size(), false);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (!dets[i].score) throw error("match_detections: detection " + std::to_string(i) +
                                    " has no score");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *dets[a].score > *dets[b].score;
  });

  for (std::size_t d : order) {
    int best_gt = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (res.gt_matched[g]) continue;
      const double iou = iou_fn(dets[d], gts[g]);
      if (iou > best_iou) {
        best_iou = iou;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0 && best_iou >= threshold) {
      res.det_is_tp[d] = true;
      res.det_matched_gt[d] = best_gt;
      res.gt_matched[best_gt] = true;
    }
  }
  return res;
}

double average_precision(std::vector<std::pair<double, bool>> scored_tp, std::size_t n_gt,
                         ApInterpolation interp, std::vector<PrSample>* curve) {
  if (n_gt == 0) throw error("average_precision: zero ground truth boxes");

  std::stable_sort(scored_tp.begin(), scored_tp.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<std::size_t> cum_tp(scored_tp.size());
  std::vector<double> precision(scored_tp.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < scored_tp.size(); ++i) {
    if (scored_tp[i].second) ++tp;
    cum_tp[i] = tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  if (curve) {
    curve->clear();
    for (std::size_t i = 0; i < scored_tp.size(); ++i)
      curve->push_back({static_cast<double>(cum_tp[i]) / static_cast<double>(n_gt),
                        precision[i], scored_tp[i].first});
  }

  // Max precision over the suffix starting at each detection.
  std::vector<double> suffix_max(precision);
  for (std::size_t i = suffix_max.size(); i-- > 1;)
    suffix_max[i - 1] = std::max(suffix_max[i - 1], suffix_max[i]);

  const std::size_t steps = interp == ApInterpolation::r40 ? 40 : 10;
  const std::size_t first_step = interp == ApInterpolation::r40 ? 1 : 0;
  double acc = 0.0;
  std::size_t idx = 0;
  for (std::size_t j = first_step; j <= steps; ++j) {
    // recall >= j/steps  <=>  cum_tp * steps >= j * n_gt, exact in integers.
    while (idx < scored_tp.size() && cum_tp[idx] * steps < j * n_gt) ++idx;
    if (idx < scored_tp.size()) acc += suffix_max[idx];
  }
  const std::size_t n_samples = steps - first_step + 1;
  return 100.0 * acc / static_cast<double>(n_samples);
}

ClassEval evaluate_class(std::span<const EvalFrame> frames, const std::string& class_name,
                         double iou_threshold, std::size_t min_points,
                         ApInterpolation interp) {
  ClassEval eval;
  std::vector<std::pair<double, bool>> scored_tp;

  for (const auto& frame : frames) {
    std::vector<Box3D> gts;
    for (const auto& g : frame.gts)
      if (g.class_name == class_name) gts.push_back(g);
    if (min_points > 0 && frame.cloud)
      gts = filter_gt_min_points(gts, *frame.cloud, min_points);

    std::vector<Box3D> dets;
    for (const auto& d : frame.dets)
      if (d.class_name == class_name) dets.push_back(d);

    const MatchResult match = match_detections(dets, gts, iou_3d, iou_threshold);
    for (std::size_t i = 0; i < dets.size(); ++i)
      scored_tp.emplace_back(*dets[i].score, match.det_is_tp[i]);

    eval.n_gt += gts.size();
    eval.n_det += dets.size();
    for (bool is_tp : match.det_is_tp) eval.n_tp += is_tp ? 1 : 0;
  }

  if (eval.n_gt == 0)
    throw error("evaluate_class: no ground truth boxes for class " + class_name);
  eval.ap = average_precision(std::move(scored_tp), eval.n_gt, interp, &eval.curve);
  return eval;
}

}  // namespace nap
