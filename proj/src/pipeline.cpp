#include "nap/pipeline.hpp"

#include <algorithm>
#include <set>

#include "nap/error.hpp"

namespace nap {

std::vector<BinaryPattern> extract_patterns(std::span<const ActivationRecord> records,
                                            const std::string& layer_id, BoxRole role) {
  std::vector<BinaryPattern> patterns;
  for (const auto& rec : records)
    if (rec.layer_id == layer_id && rec.role == role)
      patterns.push_back(extract_pattern(rec.values));
  return patterns;
}

PatternBank bank_from_dump(std::span<const ActivationRecord> records,
                           const std::string& layer_id) {
  const auto patterns = extract_patterns(records, layer_id, BoxRole::gt);
  if (patterns.empty())
    throw error("no gt-role records for layer '" + layer_id + "' to build a bank from");
  return PatternBank::build(patterns);
}

std::vector<FrameRecord> build_frame_records(std::span<const ActivationRecord> records,
                                             const std::string& layer_id,
                                             const PatternBank& bank,
                                             std::optional<double> score_threshold) {
  // Frame ids in sorted order; boxes keep dump order within a frame.
  std::map<std::string, std::vector<BinaryPattern>> by_frame;
  for (const auto& rec : records) {
    if (rec.layer_id != layer_id || rec.role != BoxRole::det) continue;
    if (score_threshold && (!rec.score || *rec.score < *score_threshold)) continue;
    by_frame[rec.frame_id].push_back(extract_pattern(rec.values));
  }

  std::vector<FrameRecord> frames;
  frames.reserve(by_frame.size());
  for (auto& [frame_id, patterns] : by_frame) {
    auto distances = bank.batch_nearest(patterns);
    frames.push_back(make_frame_record(frame_id, patterns, std::move(distances)));
  }
  return frames;
}

std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
layer_distance_sets(std::span<const ActivationRecord> records) {
  std::set<std::string> layers;
  for (const auto& rec : records) layers.insert(rec.layer_id);

  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> out;
  for (const auto& layer : layers) {
    const auto gt = extract_patterns(records, layer, BoxRole::gt);
    auto& [tp_dists, fp_dists] = out[layer];
    if (gt.empty()) continue;  // undefined layer, surfaced by rank_layers
    const PatternBank bank = PatternBank::build(gt);
    tp_dists = bank.batch_nearest(extract_patterns(records, layer, BoxRole::tp));
    fp_dists = bank.batch_nearest(extract_patterns(records, layer, BoxRole::fp));
  }
  return out;
}

}  // namespace nap
