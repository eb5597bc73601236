#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nap {

struct LayerScore {
  std::string layer_id;
  double auroc = 0.0;  // meaningless when !defined
  std::size_t n_tp = 0;
  std::size_t n_fp = 0;
  bool defined = true;  // false when a layer had no TP or no FP distances
};

// Probability that a random FP distance exceeds a random TP distance, ties
// half credit (normalized Mann-Whitney U). 1.0 means TP boxes sit closest
// to the GT bank and FP boxes farthest, which is the orientation wanted
// when ranking layers. Computed via sorting + midranks, O((n+m) log(n+m)).
double auroc(std::span<const std::size_t> tp_dists, std::span<const std::size_t> fp_dists);

// Scores every layer and sorts by AUROC descending, ties by layer_id
// ascending; the head of the list is the selected layer. Layers with an
// empty TP or FP set are reported with defined=false and ranked last.
std::vector<LayerScore> rank_layers(
    const std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>&
        per_layer);

}  // namespace nap
