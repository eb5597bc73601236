#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nap/pattern_bank.hpp"

namespace nap {

// Discrete distribution of a frame's integer box distances. Hamming
// distances are integers, so the distances themselves are the bins.
struct DistanceHistogram {
  std::map<std::size_t, double> weights;  // distance k -> probability
  std::size_t n_boxes = 0;
};

DistanceHistogram distance_histogram(std::span<const std::size_t> dists);

// Shannon entropy in nats. 0 for a single support point.
double entropy(const DistanceHistogram& h);

// One target frame ready for selection: per-box bank distances, the bit
// counts of its patterns, and the entropy of its distance distribution.
struct FrameRecord {
  std::string frame_id;
  std::vector<std::size_t> distances;
  FrameBitCounts bit_counts;
  double entropy = 0.0;
};

// Builds a record from a frame's patterns and their bank distances
// (distances.size() must equal patterns.size()).
FrameRecord make_frame_record(std::string frame_id,
                              std::span<const BinaryPattern> patterns,
                              std::vector<std::size_t> distances);

// Mean over selected frames of the mean pairwise Hamming distance to the
// candidate; 1 when nothing is selected yet.
double frame_dist(const FrameRecord& candidate, std::span<const FrameRecord> selected);

// Divides by the maximum; an all-zero input maps to all ones so a
// degenerate factor drops out of the product instead of zeroing it.
std::vector<double> max_norm(std::span<const double> values);

struct SelectionConfig {
  std::size_t target_count = 10;   // N
  std::size_t proposal_size = 0;   // K; 0 = default 10*N
  std::size_t min_boxes = 1;       // frames with fewer boxes are ineligible
  std::optional<double> score_threshold;  // applied upstream when building records
};

struct SelectionStep {
  std::size_t iter = 0;  // 1-based
  std::string frame_id;
  double raw_entropy = 0.0;
  double raw_dist = 0.0;
  double norm_entropy = 0.0;
  double norm_dist = 0.0;
  double product = 0.0;
};

struct SelectionResult {
  SelectionConfig config;
  std::vector<SelectionStep> selected;
};

// Iterative diverse frame selection. Per iteration: take the top-K
// unselected frames by raw entropy (ties by frame_id ascending), compute
// each candidate's mean distance to the already-selected set, max-normalize
// both factors over the proposal set, and pick the argmax of their product
// (ties by frame_id ascending). Stops after min(N, #eligible) picks.
SelectionResult select_frames(std::span<const FrameRecord> frames, const SelectionConfig& cfg);

}  // namespace nap
