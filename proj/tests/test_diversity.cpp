#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "nap/diversity.hpp"
#include "nap/error.hpp"
#include "oracles.hpp"

using nap::BinaryPattern;
using nap::FrameRecord;
using nap::SelectionConfig;

namespace {

std::vector<std::size_t> d(std::initializer_list<std::size_t> v) { return {v}; }

FrameRecord frame_with_entropy(std::string id, std::vector<const char*> patterns,
                               double entropy) {
  std::vector<BinaryPattern> pats;
  for (const char* s : patterns) pats.push_back(BinaryPattern::from_string(s));
  FrameRecord rec;
  rec.frame_id = std::move(id);
  rec.bit_counts = nap::frame_bit_counts(pats);
  rec.distances.assign(pats.size(), 0);
  rec.entropy = entropy;
  return rec;
}

}  // namespace

TEST_CASE("distance_histogram normalizes frequencies") {
  const auto h = nap::distance_histogram(d({2, 2, 5}));
  CHECK(oracle::near_abs(h.weights.at(2), 2.0 / 3.0, 1e-12));
  CHECK(oracle::near_abs(h.weights.at(5), 1.0 / 3.0, 1e-12));
  CHECK(h.n_boxes == 3);

  CHECK(nap::distance_histogram(d({7})).weights.at(7) == 1.0);

  const auto u = nap::distance_histogram(d({0, 1, 2, 3}));
  for (const auto& [k, p] : u.weights) CHECK(p == 0.25);

  CHECK_THROWS_AS(nap::distance_histogram({}), nap::error);
}

TEST_CASE("entropy fixtures") {
  CHECK(nap::entropy(nap::distance_histogram(d({7}))) == 0.0);
  CHECK(oracle::near_abs(nap::entropy(nap::distance_histogram(d({0, 1, 2, 3}))),
                         std::log(4.0), 1e-12));
  CHECK(oracle::near_abs(nap::entropy(nap::distance_histogram(d({2, 2, 5}))), 0.636514, 1e-6));
}

TEST_CASE("entropy is bounded by log of support size") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  std::uniform_int_distribution<std::size_t> value(0, 12);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> dists(len(rng));
    for (auto& v : dists) v = value(rng);
    const auto h = nap::distance_histogram(dists);
    const double e = nap::entropy(h);
    CHECK(e >= 0.0);
    CHECK(e <= std::log(static_cast<double>(h.weights.size())) + 1e-12);
  }
}

TEST_CASE("frame_dist fixtures") {
  const auto cand = frame_with_entropy("c", {"00"}, 0.0);
  CHECK(nap::frame_dist(cand, {}) == 1.0);

  const auto same = frame_with_entropy("s", {"00"}, 0.0);
  std::vector<FrameRecord> one = {same};
  CHECK(nap::frame_dist(cand, one) == 0.0);

  std::vector<FrameRecord> two = {frame_with_entropy("a", {"11"}, 0.0),
                                  frame_with_entropy("b", {"01"}, 0.0)};
  CHECK(nap::frame_dist(cand, two) == 1.5);
}

TEST_CASE("max_norm scales by the maximum") {
  CHECK(nap::max_norm(std::vector<double>{0.5, 1.0, 2.0}) ==
        std::vector<double>{0.25, 0.5, 1.0});
  CHECK(nap::max_norm(std::vector<double>{0, 0, 0}) == std::vector<double>{1, 1, 1});
  CHECK(nap::max_norm(std::vector<double>{3}) == std::vector<double>{1.0});
  CHECK_THROWS_AS(nap::max_norm(std::vector<double>{-1.0}), nap::error);
  CHECK_THROWS_AS(nap::max_norm({}), nap::error);
}

TEST_CASE("select_frames three-frame fixture picks [A, C]") {
  // A and B hold one identical pattern; C differs from A in all 8 bits.
  std::vector<FrameRecord> frames = {
      frame_with_entropy("A", {"11111111"}, 1.0),
      frame_with_entropy("B", {"11111111"}, 0.9),
      frame_with_entropy("C", {"00000000"}, 0.1),
  };
  SelectionConfig cfg;
  cfg.target_count = 2;
  cfg.proposal_size = 3;
  const auto result = nap::select_frames(frames, cfg);
  REQUIRE(result.selected.size() == 2);

  CHECK(result.selected[0].frame_id == "A");
  CHECK(result.selected[0].raw_entropy == 1.0);
  CHECK(result.selected[0].raw_dist == 1.0);
  CHECK(result.selected[0].norm_dist == 1.0);
  CHECK(result.selected[0].product == 1.0);

  CHECK(result.selected[1].frame_id == "C");
  CHECK(result.selected[1].raw_dist == 8.0);
  CHECK(result.selected[1].norm_dist == 1.0);
  CHECK(result.selected[1].norm_entropy == doctest::Approx(0.1 / 0.9));
  CHECK(result.selected[1].product == doctest::Approx(0.1 / 0.9));
}

TEST_CASE("select_frames exhausts when N covers all frames") {
  std::vector<FrameRecord> frames = {
      frame_with_entropy("f2", {"1100"}, 0.3),
      frame_with_entropy("f1", {"0011"}, 0.7),
      frame_with_entropy("f3", {"1010"}, 0.5),
  };
  SelectionConfig cfg;
  cfg.target_count = 10;
  cfg.proposal_size = 10;
  const auto result = nap::select_frames(frames, cfg);
  REQUIRE(result.selected.size() == 3);
  CHECK(result.selected[0].frame_id == "f1");  // max entropy first

  std::vector<std::string> ids;
  for (const auto& s : result.selected) ids.push_back(s.frame_id);
  std::sort(ids.begin(), ids.end());
  CHECK(ids == std::vector<std::string>{"f1", "f2", "f3"});
}

TEST_CASE("select_frames singleton and error cases") {
  std::vector<FrameRecord> one = {frame_with_entropy("x", {"10"}, 0.0)};
  SelectionConfig cfg;
  cfg.target_count = 5;
  const auto result = nap::select_frames(one, cfg);
  REQUIRE(result.selected.size() == 1);
  CHECK(result.selected[0].frame_id == "x");

  CHECK_THROWS_AS(nap::select_frames({}, cfg), nap::error);

  SelectionConfig strict;
  strict.target_count = 1;
  strict.min_boxes = 3;
  CHECK_THROWS_AS(nap::select_frames(one, strict), nap::error);

  std::vector<FrameRecord> dup = {frame_with_entropy("x", {"10"}, 0.0),
                                  frame_with_entropy("x", {"01"}, 0.0)};
  CHECK_THROWS_AS(nap::select_frames(dup, cfg), nap::error);
}

namespace {

struct Instance {
  std::vector<FrameRecord> frames;
  std::vector<oracle::ReplayFrame> replay;
};

Instance random_instance(std::mt19937_64& rng, std::size_t max_frames, std::size_t max_boxes,
                         std::size_t dim) {
  std::uniform_int_distribution<std::size_t> n_frames(1, max_frames);
  std::uniform_int_distribution<std::size_t> n_boxes(1, max_boxes);
  std::uniform_int_distribution<std::size_t> dist_value(0, dim / 2);
  Instance inst;
  const std::size_t count = n_frames(rng);
  for (std::size_t f = 0; f < count; ++f) {
    oracle::ReplayFrame rf;
    rf.id = "frame_" + std::to_string(100 + f);
    const std::size_t boxes = n_boxes(rng);
    for (std::size_t b = 0; b < boxes; ++b) {
      rf.patterns.push_back(oracle::random_pattern(rng, dim));
      rf.distances.push_back(dist_value(rng));
    }
    inst.frames.push_back(nap::make_frame_record(rf.id, rf.patterns, rf.distances));
    inst.replay.push_back(std::move(rf));
  }
  return inst;
}

}  // namespace

TEST_CASE("select_frames agrees with the replay oracle on random instances") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 40; ++t) {
    const auto inst = random_instance(rng, 15, 8, 32);
    SelectionConfig cfg;
    cfg.target_count = 1 + rng() % (inst.frames.size() + 2);
    cfg.proposal_size = 1 + rng() % (inst.frames.size() + 2);
    const auto got = nap::select_frames(inst.frames, cfg);
    const auto want =
        oracle::replay_selection(inst.replay, cfg.proposal_size, cfg.target_count);
    REQUIRE(got.selected.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.selected[i].frame_id == want[i].id);
      CHECK(got.selected[i].raw_entropy == want[i].h);
      CHECK(got.selected[i].raw_dist == want[i].dist);
      CHECK(got.selected[i].norm_entropy == want[i].h_norm);
      CHECK(got.selected[i].norm_dist == want[i].dist_norm);
      CHECK(got.selected[i].product == want[i].product);
    }
  }
}

TEST_CASE("selection is independent of input order and has no duplicates") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    auto inst = random_instance(rng, 12, 6, 24);
    SelectionConfig cfg;
    cfg.target_count = 1 + rng() % inst.frames.size();
    cfg.proposal_size = 1 + rng() % (inst.frames.size() + 1);
    const auto a = nap::select_frames(inst.frames, cfg);

    std::shuffle(inst.frames.begin(), inst.frames.end(), rng);
    const auto b = nap::select_frames(inst.frames, cfg);
    REQUIRE(a.selected.size() == b.selected.size());
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < a.selected.size(); ++i) {
      CHECK(a.selected[i].frame_id == b.selected[i].frame_id);
      ids.push_back(a.selected[i].frame_id);
    }
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
  }
}

TEST_CASE("scaling entropies or distances leaves the pick order unchanged") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 15; ++t) {
    auto inst = random_instance(rng, 10, 5, 16);
    SelectionConfig cfg;
    cfg.target_count = inst.frames.size();
    cfg.proposal_size = 3;
    const auto base = nap::select_frames(inst.frames, cfg);

    // Power-of-two factor so the scaling itself is exact in floating point.
    auto scaled = inst.frames;
    for (auto& f : scaled) f.entropy *= 8.0;
    const auto scaled_h = nap::select_frames(scaled, cfg);

    // Doubling every bit doubles all pairwise Hamming distances.
    auto doubled = inst.frames;
    for (std::size_t f = 0; f < doubled.size(); ++f) {
      std::vector<BinaryPattern> wide;
      for (const auto& p : inst.replay[f].patterns) {
        std::string s;
        for (std::size_t j = 0; j < p.dim(); ++j) {
          s.push_back(p.bit(j) ? '1' : '0');
          s.push_back(p.bit(j) ? '1' : '0');
        }
        wide.push_back(BinaryPattern::from_string(s));
      }
      doubled[f].bit_counts = nap::frame_bit_counts(wide);
    }
    const auto scaled_d = nap::select_frames(doubled, cfg);

    for (std::size_t i = 0; i < base.selected.size(); ++i) {
      CHECK(scaled_h.selected[i].frame_id == base.selected[i].frame_id);
      CHECK(scaled_d.selected[i].frame_id == base.selected[i].frame_id);
    }
  }
}
