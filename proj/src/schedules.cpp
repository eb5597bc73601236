#include "nap/schedules.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

#include "nap/error.hpp"

namespace nap {

namespace {

void check_lengths(std::span<const float> w, std::span<const float> w0) {
  if (w.size() != w0.size())
    throw error("l2sp: weight length mismatch (" + std::to_string(w.size()) + " vs " +
                std::to_string(w0.size()) + ")");
  if (w.empty()) throw error("l2sp: empty weight vectors");
}

}  // namespace

double l2sp_penalty(std::span<const float> w, std::span<const float> w0, double alpha) {
  check_lengths(w, w0);
  if (alpha < 0) throw error("l2sp: alpha must be >= 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = static_cast<double>(w[i]) - static_cast<double>(w0[i]);
    acc += d * d;
  }
  return alpha * acc;
}

std::vector<double> l2sp_gradient(std::span<const float> w, std::span<const float> w0,
                                  double alpha) {
  check_lengths(w, w0);
  if (alpha < 0) throw error("l2sp: alpha must be >= 0");
  std::vector<double> grad(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    grad[i] = 2.0 * alpha * (static_cast<double>(w[i]) - static_cast<double>(w0[i]));
  return grad;
}

std::vector<double> linear_fade(double lr0, std::size_t epochs) {
  if (lr0 <= 0) throw error("linear_fade: lr0 must be > 0");
  if (epochs == 0) throw error("linear_fade: epochs must be >= 1");
  std::vector<double> lr(epochs + 1);
  for (std::size_t e = 0; e <= epochs; ++e)
    lr[e] = lr0 * static_cast<double>(epochs - e) / static_cast<double>(epochs);
  return lr;
}

std::vector<double> const_schedule(double lr, std::size_t epochs) {
  if (lr <= 0) throw error("const_schedule: lr must be > 0");
  if (epochs == 0) throw error("const_schedule: epochs must be >= 1");
  return std::vector<double>(epochs + 1, lr);
}

std::vector<float> read_weight_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 8) throw error(path.string() + ": truncated weight file");
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= std::uint64_t(bytes[i]) << (8 * i);
  if (bytes.size() != 8 + count * 4)
    throw error(path.string() + ": expected " + std::to_string(8 + count * 4) +
                " bytes for " + std::to_string(count) + " weights, got " +
                std::to_string(bytes.size()));
  std::vector<float> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= std::uint32_t(bytes[8 + i * 4 + b]) << (8 * b);
    values[i] = std::bit_cast<float>(u);
    if (!std::isfinite(values[i]))
      throw error(path.string() + ": non-finite weight at index " + std::to_string(i));
  }
  return values;
}

void write_weight_file(const std::filesystem::path& path, std::span<const float> values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write " + path.string());
  const std::uint64_t count = values.size();
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((count >> (8 * i)) & 0xff));
  for (float v : values) {
    const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) out.put(static_cast<char>((u >> (8 * b)) & 0xff));
  }
  if (!out) throw error("write failed: " + path.string());
}

}  // namespace nap
