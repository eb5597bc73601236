#include "nap/layer_select.hpp"

#include <algorithm>

#include "nap/error.hpp"

namespace nap {

double auroc(std::span<const std::size_t> tp_dists, std::span<const std::size_t> fp_dists) {
  if (tp_dists.empty()) throw error("auroc: empty TP distance set");
  if (fp_dists.empty()) throw error("auroc: empty FP distance set");

  // Midrank form: sort the pooled sample, assign tied values the mean of
  // their rank range, then U_fp = R_fp - m(m+1)/2.
  struct Item {
    std::size_t value;
    bool is_fp;
  };
  std::vector<Item> pooled;
  pooled.reserve(tp_dists.size() + fp_dists.size());
  for (std::size_t v : tp_dists) pooled.push_back({v, false});
  for (std::size_t v : fp_dists) pooled.push_back({v, true});
  std::sort(pooled.begin(), pooled.end(),
            [](const Item& a, const Item& b) { return a.value < b.value; });

  double fp_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    // 1-based ranks i+1 .. j share the midrank.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].is_fp) fp_rank_sum += midrank;
    i = j;
  }

  const double n = static_cast<double>(tp_dists.size());
  const double m = static_cast<double>(fp_dists.size());
  const double u_fp = fp_rank_sum - m * (m + 1.0) / 2.0;
  return u_fp / (n * m);
}

std::vector<LayerScore> rank_layers(
    const std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>&
        per_layer) {
  std::vector<LayerScore> scores;
  scores.reserve(per_layer.size());
  for (const auto& [layer_id, dists] : per_layer) {
    LayerScore s;
    s.layer_id = layer_id;
    s.n_tp = dists.first.size();
    s.n_fp = dists.second.size();
    if (s.n_tp == 0 || s.n_fp == 0) {
      s.defined = false;
    } else {
      s.auroc = auroc(dists.first, dists.second);
    }
    scores.push_back(std::move(s));
  }
  std::sort(scores.begin(), scores.end(), [](const LayerScore& a, const LayerScore& b) {
    if (a.defined != b.defined) return a.defined;  // undefined ranked last
    if (a.defined && a.auroc != b.auroc) return a.auroc > b.auroc;
    return a.layer_id < b.layer_id;
  });
  return scores;
}

}  // namespace nap
