#include "nap/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "nap/error.hpp"

namespace nap {

DistanceHistogram distance_histogram(std::span<const std::size_t> dists) {
  if (dists.empty()) throw error("distance_histogram: empty distance list");
  DistanceHistogram h;
  h.n_boxes = dists.size();
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t d : dists) ++counts[d];
  const double n = static_cast<double>(dists.size());
  for (const auto& [k, c] : counts) h.weights[k] = static_cast<double>(c) / n;
  return h;
}

double entropy(const DistanceHistogram& h) {
  double e = 0.0;
  for (const auto& [k, p] : h.weights) e -= p * std::log(p);
  return e < 0.0 ? 0.0 : e;  // clamp the -0.0 from a single support point
}

FrameRecord make_frame_record(std::string frame_id,
                              std::span<const BinaryPattern> patterns,
                              std::vector<std::size_t> distances) {
  if (patterns.size() != distances.size())
    throw error("make_frame_record: distances/patterns length mismatch for frame " + frame_id);
  FrameRecord rec;
  rec.frame_id = std::move(frame_id);
  rec.bit_counts = frame_bit_counts(patterns);
  rec.entropy = entropy(distance_histogram(distances));
  rec.distances = std::move(distances);
  return rec;
}

double frame_dist(const FrameRecord& candidate, std::span<const FrameRecord> selected) {
  if (selected.empty()) return 1.0;
  if (candidate.bit_counts.n_boxes == 0) throw error("frame_dist: candidate has zero boxes");
  double sum = 0.0;
  for (const auto& s : selected) sum += mean_pairwise_hamming(candidate.bit_counts, s.bit_counts);
  return sum / static_cast<double>(selected.size());
}

std::vector<double> max_norm(std::span<const double> values) {
  if (values.empty()) throw error("max_norm: empty input");
  double mx = 0.0;
  for (double v : values) {
    if (v < 0.0) throw error("max_norm: negative input");
    mx = std::max(mx, v);
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = mx == 0.0 ? 1.0 : values[i] / mx;
  return out;
}

SelectionResult select_frames(std::span<const FrameRecord> frames, const SelectionConfig& cfg) {
  if (cfg.target_count == 0) throw error("select_frames: target_count must be >= 1");

  std::unordered_set<std::string> seen;
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!seen.insert(frames[i].frame_id).second)
      throw error("select_frames: duplicate frame_id " + frames[i].frame_id);
    const std::size_t n = frames[i].bit_counts.n_boxes;
    if (n >= 1 && n >= cfg.min_boxes) eligible.push_back(i);
  }
  if (eligible.empty()) throw error("select_frames: no eligible frames");

  const std::size_t want = std::min<std::size_t>(cfg.target_count, eligible.size());
  const std::size_t k = cfg.proposal_size > 0 ? cfg.proposal_size : 10 * cfg.target_count;

  // Entropy order is fixed across iterations; ties by frame_id ascending.
  std::sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
    if (frames[a].entropy != frames[b].entropy) return frames[a].entropy > frames[b].entropy;
    return frames[a].frame_id < frames[b].frame_id;
  });

  // Lazy per-frame accumulator of sum over selected frames of the mean
  // pairwise Hamming distance; pair distances never change, so each pair is
  // computed at most once.
  std::vector<double> dist_sum(frames.size(), 0.0);
  std::vector<std::size_t> dist_upto(frames.size(), 0);  // #selected already folded in

  SelectionResult result;
  result.config = cfg;
  std::vector<std::size_t> selected_idx;
  std::vector<char> is_selected(frames.size(), 0);

  while (selected_idx.size() < want) {
    std::vector<std::size_t> proposal;
    for (std::size_t idx : eligible) {
      if (is_selected[idx]) continue;
      proposal.push_back(idx);
      if (proposal.size() == k) break;
    }

    std::vector<double> raw_h(proposal.size());
    std::vector<double> raw_dist(proposal.size());
    for (std::size_t c = 0; c < proposal.size(); ++c) {
      const std::size_t idx = proposal[c];
      raw_h[c] = frames[idx].entropy;
      for (std::size_t v = dist_upto[idx]; v < selected_idx.size(); ++v)
        dist_sum[idx] +=
            mean_pairwise_hamming(frames[idx].bit_counts, frames[selected_idx[v]].bit_counts);
      dist_upto[idx] = selected_idx.size();
      raw_dist[c] = selected_idx.empty()
                        ? 1.0
                        : dist_sum[idx] / static_cast<double>(selected_idx.size());
    }

    const std::vector<double> norm_h = max_norm(raw_h);
    const std::vector<double> norm_dist = max_norm(raw_dist);

    std::size_t best = 0;
    double best_product = norm_h[0] * norm_dist[0];
    for (std::size_t c = 1; c < proposal.size(); ++c) {
      const double product = norm_h[c] * norm_dist[c];
      if (product > best_product ||
          (product == best_product &&
           frames[proposal[c]].frame_id < frames[proposal[best]].frame_id)) {
        best = c;
        best_product = product;
      }
    }

    const std::size_t pick = proposal[best];
    SelectionStep step;
    step.iter = selected_idx.size() + 1;
    step.frame_id = frames[pick].frame_id;
    step.raw_entropy = raw_h[best];
    step.raw_dist = raw_dist[best];
    step.norm_entropy = norm_h[best];
    step.norm_dist = norm_dist[best];
    step.product = best_product;
    result.selected.push_back(std::move(step));

    is_selected[pick] = 1;
    selected_idx.push_back(pick);
  }
  return result;
}

}  // namespace nap
