#include <cmath>
#include <random>

#include "doctest.h"
#include "nap/error.hpp"
#include "nap/metrics.hpp"
#include "oracles.hpp"

using nap::Box3D;
using nap::PointCloud;

namespace {

Box3D box(double x, double y, double z, double h, double w, double l, double yaw,
          std::optional<double> score = std::nullopt) {
  Box3D b;
  b.class_name = "Car";
  b.x = x;
  b.y = y;
  b.z = z;
  b.h = h;
  b.w = w;
  b.l = l;
  b.yaw = yaw;
  b.score = score;
  return b;
}

}  // namespace

TEST_CASE("iou_bev basic fixtures") {
  const Box3D a = box(0, 0, 5, 2, 2, 4, 0.3);
  CHECK(nap::iou_bev(a, a) == 1.0);

  const Box3D b = box(10, 0, 5, 2, 2, 4, 0.0);
  const Box3D c = box(0, 0, 5, 2, 2, 4, 0.0);
  CHECK(nap::iou_bev(b, c) == 0.0);

  // Two unit squares, same center, one rotated 45 degrees: octagon overlap.
  const Box3D s1 = box(0, 0, 0, 1, 1, 1, 0.0);
  const Box3D s2 = box(0, 0, 0, 1, 1, 1, std::numbers::pi / 4);
  const double inter = 2.0 * (std::sqrt(2.0) - 1.0);
  CHECK(oracle::near_abs(nap::iou_bev(s1, s2), inter / (2.0 - inter), 1e-9));
  CHECK(oracle::near_abs(nap::iou_bev(s1, s2), 0.7071, 5e-3));

  Box3D degenerate = a;
  degenerate.w = 0.0;
  CHECK_THROWS_AS(nap::iou_bev(a, degenerate), nap::error);
}

TEST_CASE("iou_3d fixtures") {
  const Box3D a = box(1, 2, 9, 2, 2, 4, -0.8);
  CHECK(nap::iou_3d(a, a) == 1.0);

  Box3D above = a;
  above.y = a.y - a.h;  // vertical intervals just touch
  CHECK(nap::iou_3d(a, above) == 0.0);

  // Same footprint, half-height overlap: (A*h/2) / (2Ah - A*h/2) = 1/3.
  Box3D shifted = a;
  shifted.y = a.y + a.h / 2;
  CHECK(oracle::near_abs(nap::iou_3d(a, shifted), 1.0 / 3.0, 1e-12));
}

TEST_CASE("iou is symmetric and rigid-transform invariant") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> dim(0.5, 6.0);
  std::uniform_real_distribution<double> yaw(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> offs(-3.0, 3.0);
  for (int t = 0; t < 60; ++t) {
    const Box3D a = box(offs(rng), offs(rng), offs(rng), dim(rng), dim(rng), dim(rng), yaw(rng));
    const Box3D b = box(a.x + offs(rng), a.y + offs(rng), a.z + offs(rng), dim(rng), dim(rng),
                        dim(rng), yaw(rng));
    CHECK(oracle::near_abs(nap::iou_3d(a, b), nap::iou_3d(b, a), 1e-12));
    CHECK(oracle::near_abs(nap::iou_bev(a, b), nap::iou_bev(b, a), 1e-12));

    // Common translation in x-z plus common yaw rotation about the origin.
    const double dx = offs(rng), dz = offs(rng), rot = yaw(rng);
    const auto transform = [&](const Box3D& in) {
      Box3D out = in;
      const double c = std::cos(rot), s = std::sin(rot);
      out.x = in.x * c + in.z * s + dx;
      out.z = -in.x * s + in.z * c + dz;
      out.yaw = std::remainder(in.yaw + rot, 2 * std::numbers::pi);
      return out;
    };
    CHECK(oracle::near_abs(nap::iou_3d(transform(a), transform(b)), nap::iou_3d(a, b), 1e-9));
  }
}

TEST_CASE("iou_3d agrees with the Monte Carlo oracle") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> dim(0.5, 6.0);
  std::uniform_real_distribution<double> yaw(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> offs(-3.0, 3.0);
  for (int t = 0; t < 25; ++t) {
    const Box3D a = box(offs(rng), offs(rng), offs(rng), dim(rng), dim(rng), dim(rng), yaw(rng));
    const Box3D b = box(a.x + offs(rng), a.y + offs(rng), a.z + offs(rng), dim(rng), dim(rng),
                        dim(rng), yaw(rng));
    const oracle::McBox ma{a.x, a.y, a.z, a.h, a.w, a.l, a.yaw};
    const oracle::McBox mb{b.x, b.y, b.z, b.h, b.w, b.l, b.yaw};
    const double mc = oracle::mc_iou_3d(ma, mb, 200000, rng);
    CHECK(oracle::near_abs(nap::iou_3d(a, b), mc, 0.01));
  }
}

TEST_CASE("points_in_box is boundary inclusive") {
  const Box3D b = box(0, 0, 5, 2, 2, 4, 0.0);
  PointCloud cloud;
  cloud.points.push_back({0, -1, 5, 0});    // center of volume
  cloud.points.push_back({10, -1, 5, 0});   // far away
  cloud.points.push_back({2, 0, 5, 0});     // on the +length face, y on bottom face
  CHECK(nap::points_in_box(cloud, b) == 2);

  PointCloud face;
  face.points.push_back({0, -2, 5, 0});  // exactly on the top face
  CHECK(nap::points_in_box(face, b) == 1);
}

TEST_CASE("points_in_box is rigid-transform invariant") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Box3D b = box(1, 0.5, 6, 1.8, 1.7, 4.1, 0.6);
  PointCloud cloud;
  for (int i = 0; i < 300; ++i)
    cloud.points.push_back({static_cast<float>(1 + u(rng)), static_cast<float>(u(rng) / 2),
                            static_cast<float>(6 + u(rng)), 0});
  const std::size_t base = nap::points_in_box(cloud, b);

  const double rot = 1.1, dx = 3.0, dz = -2.0, c = std::cos(rot), s = std::sin(rot);
  Box3D tb = b;
  tb.x = b.x * c + b.z * s + dx;
  tb.z = -b.x * s + b.z * c + dz;
  tb.yaw = b.yaw + rot;
  PointCloud tc;
  for (const auto& p : cloud.points)
    tc.points.push_back({static_cast<float>(p.x * c + p.z * s + dx), p.y,
                         static_cast<float>(-p.x * s + p.z * c + dz), 0});
  // Float rounding can flip exact-boundary points; none here sit on faces.
  CHECK(nap::points_in_box(tc, tb) == base);
}

TEST_CASE("filter_gt_min_points applies the <50 rule inclusively") {
  const Box3D gt = box(0, 0, 5, 2, 2, 4, 0.0);
  PointCloud cloud50, cloud49;
  for (int i = 0; i < 50; ++i) {
    cloud50.points.push_back({0, -1, 5, 0});
    if (i < 49) cloud49.points.push_back({0, -1, 5, 0});
  }
  CHECK(nap::filter_gt_min_points(std::vector<Box3D>{gt}, cloud50).size() == 1);
  CHECK(nap::filter_gt_min_points(std::vector<Box3D>{gt}, cloud49).empty());
  CHECK(nap::filter_gt_min_points(std::vector<Box3D>{gt}, PointCloud{}).empty());
}

TEST_CASE("match_detections greedy matching") {
  const Box3D gt = box(0, 0, 5, 2, 2, 4, 0.0);

  SUBCASE("single overlap above threshold is a TP") {
    const Box3D det = box(0.2, 0, 5, 2, 2, 4, 0.0, 0.9);
    REQUIRE(nap::iou_3d(det, gt) > 0.7);
    const auto m = nap::match_detections(std::vector<Box3D>{det}, std::vector<Box3D>{gt},
                                         nap::iou_3d, 0.7);
    CHECK(m.det_is_tp == std::vector<bool>{true});
    CHECK(m.gt_matched == std::vector<bool>{true});
  }

  SUBCASE("a GT can be claimed once, by the higher score") {
    const Box3D d1 = box(0.1, 0, 5, 2, 2, 4, 0.0, 0.5);
    const Box3D d2 = box(0.05, 0, 5, 2, 2, 4, 0.0, 0.8);
    const auto m = nap::match_detections(std::vector<Box3D>{d1, d2}, std::vector<Box3D>{gt},
                                         nap::iou_3d, 0.7);
    CHECK(m.det_is_tp == std::vector<bool>{false, true});
  }

  SUBCASE("below threshold is an FP and the GT stays missed") {
    const Box3D det = box(1.8, 0, 5, 2, 2, 4, 0.0, 0.9);
    REQUIRE(nap::iou_3d(det, gt) < 0.7);
    const auto m = nap::match_detections(std::vector<Box3D>{det}, std::vector<Box3D>{gt},
                                         nap::iou_3d, 0.7);
    CHECK(m.det_is_tp == std::vector<bool>{false});
    CHECK(m.gt_matched == std::vector<bool>{false});
  }

  SUBCASE("scoreless detections are rejected") {
    const Box3D det = box(0, 0, 5, 2, 2, 4, 0.0);
    CHECK_THROWS_AS(nap::match_detections(std::vector<Box3D>{det}, std::vector<Box3D>{gt},
                                          nap::iou_3d, 0.7),
                    nap::error);
  }
}

TEST_CASE("average_precision fixtures") {
  using Scored = std::vector<std::pair<double, bool>>;
  CHECK(nap::average_precision(Scored{{0.9, true}}, 1) == 100.0);
  // 2 GT, one TP, no FP: precision 1 up to recall 0.5 -> 20 of 40 points.
  CHECK(nap::average_precision(Scored{{0.9, true}}, 2) == 50.0);
  CHECK(nap::average_precision(Scored{{0.9, false}, {0.8, false}}, 3) == 0.0);
  CHECK(nap::average_precision(Scored{}, 2) == 0.0);
  CHECK_THROWS_AS(nap::average_precision(Scored{{0.9, true}}, 0), nap::error);

  // 11-point mode includes recall 0, so a perfect detection still scores 100.
  CHECK(nap::average_precision(Scored{{0.9, true}}, 1, nap::ApInterpolation::r11) == 100.0);
}

TEST_CASE("AP is monotone under adding TPs and lowest-score FPs") {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> score(0.1, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::pair<double, bool>> dets;
    const std::size_t n_gt = 1 + rng() % 20;
    const std::size_t n_det = rng() % 20;
    std::size_t tps = 0;
    for (std::size_t i = 0; i < n_det; ++i) {
      const bool tp = tps < n_gt && rng() % 2 == 0;
      if (tp) ++tps;
      dets.push_back({score(rng), tp});
    }
    const double base = nap::average_precision(dets, n_gt);

    if (tps < n_gt) {
      auto more = dets;
      more.push_back({score(rng), true});
      CHECK(nap::average_precision(more, n_gt) >= base - 1e-12);
    }
    auto worse = dets;
    worse.push_back({0.0, false});
    CHECK(nap::average_precision(worse, n_gt) <= base + 1e-12);
  }
}

TEST_CASE("evaluate_class end to end") {
  const Box3D gt1 = box(0, 0, 5, 2, 2, 4, 0.0);
  const Box3D gt2 = box(10, 0, 5, 2, 2, 4, 0.0);
  const Box3D hit = box(0.1, 0, 5, 2, 2, 4, 0.0, 0.9);

  nap::EvalFrame frame;
  frame.gts = {gt1, gt2};
  frame.dets = {hit};
  const auto eval = nap::evaluate_class(std::vector<nap::EvalFrame>{frame}, "Car", 0.7);
  CHECK(eval.ap == 50.0);
  CHECK(eval.n_gt == 2);
  CHECK(eval.n_tp == 1);

  CHECK_THROWS_AS(nap::evaluate_class(std::vector<nap::EvalFrame>{frame}, "Cyclist", 0.7),
                  nap::error);
}
