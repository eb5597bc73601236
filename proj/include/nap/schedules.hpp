#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace nap {

// Post-training penalty anchoring weights to the pre-trained starting
// point: alpha * ||w - w0||^2.
double l2sp_penalty(std::span<const float> w, std::span<const float> w0, double alpha);

// Gradient of the penalty: 2 * alpha * (w - w0).
std::vector<double> l2sp_gradient(std::span<const float> w, std::span<const float> w0,
                                  double alpha);

// Per-epoch learning rate lr0 * (1 - e/E) for e = 0..E; the last entry is
// exactly 0 so the final boundary takes no update.
std::vector<double> linear_fade(double lr0, std::size_t epochs);

// E+1 identical entries, matching linear_fade's table length.
std::vector<double> const_schedule(double lr, std::size_t epochs);

// Flat weight file: u64-LE count then f32-LE values.
std::vector<float> read_weight_file(const std::filesystem::path& path);
void write_weight_file(const std::filesystem::path& path, std::span<const float> values);

}  // namespace nap
