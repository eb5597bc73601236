#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace nap {

// Binary activation pattern: d bits packed little-endian into 64-bit words
// (bit j lives in word j/64 at position j%64). Pad bits above d are kept
// zero so XOR + popcount over whole words needs no masking.
class BinaryPattern {
 public:
  BinaryPattern() = default;

  // Takes ownership of pre-packed words; pad bits must be zero.
  static BinaryPattern from_words(std::size_t dim, std::vector<std::uint64_t> words);
  // Builds from a "0101..." string, character i = bit i. Test/debug helper.
  static BinaryPattern from_string(const std::string& bits);

  std::size_t dim() const { return dim_; }
  std::span<const std::uint64_t> words() const { return words_; }
  bool bit(std::size_t j) const {
    return (words_[j >> 6] >> (j & 63)) & 1u;
  }
  std::size_t popcount() const;
  std::string to_string() const;

  bool operator==(const BinaryPattern&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::size_t words_for_dim(std::size_t dim) { return (dim + 63) / 64; }

// Zeroes the floor(d/2) smallest entries (already-zero entries count among
// the smallest) and keeps the remaining ceil(d/2) largest in place. Ties at
// the cut value keep the lower index.
std::vector<float> clip_top_half(std::span<const float> values);

// Bit j = 1 iff clipped[j] > 0 (strict, so zeros surviving the cut stay 0).
BinaryPattern binarize(std::span<const float> clipped);

// binarize(clip_top_half(values)).
BinaryPattern extract_pattern(std::span<const float> values);

// Number of differing bit positions. Dims must match.
std::size_t hamming(const BinaryPattern& a, const BinaryPattern& b);

// Pattern cache file: magic "NAPB", u8 version=1, u32-LE dim, u64-LE count,
// then ceil(d/64) u64-LE words per pattern.
void write_pattern_file(const std::filesystem::path& path,
                        std::span<const BinaryPattern> patterns);
std::vector<BinaryPattern> read_pattern_file(const std::filesystem::path& path);

}  // namespace nap
