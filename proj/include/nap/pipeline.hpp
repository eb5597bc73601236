#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nap/diversity.hpp"
#include "nap/kitti_io.hpp"
#include "nap/layer_select.hpp"
#include "nap/pattern.hpp"
#include "nap/pattern_bank.hpp"

namespace nap {

// Patterns of every record matching layer and role, dump order.
std::vector<BinaryPattern> extract_patterns(std::span<const ActivationRecord> records,
                                            const std::string& layer_id, BoxRole role);

// Bank built from the layer's gt-role records.
PatternBank bank_from_dump(std::span<const ActivationRecord> records,
                           const std::string& layer_id);

// Groups det-role records of one layer by frame, drops detections below
// score_threshold, and computes per-frame distances and entropies against
// the bank. Frames ordered by frame_id ascending.
std::vector<FrameRecord> build_frame_records(std::span<const ActivationRecord> records,
                                             const std::string& layer_id,
                                             const PatternBank& bank,
                                             std::optional<double> score_threshold);

// Per-layer TP/FP nearest distances against that layer's own gt bank.
// Layers lacking gt records get empty distance sets (rank_layers reports
// them as undefined).
std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
layer_distance_sets(std::span<const ActivationRecord> records);

}  // namespace nap
