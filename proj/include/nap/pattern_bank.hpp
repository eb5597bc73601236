#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nap/pattern.hpp"

namespace nap {

// Immutable bank of source ground-truth patterns, queried by minimum
// Hamming distance. Patterns are stored contiguously (pattern-major) so the
// scan is a linear pass of XOR + popcount with early exit. Duplicates are
// kept; they cannot change a minimum.
class PatternBank {
 public:
  static PatternBank build(std::span<const BinaryPattern> patterns);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return count_; }
  BinaryPattern pattern(std::size_t i) const;

  // Exact min Hamming distance over all bank patterns.
  std::size_t nearest_distance(const BinaryPattern& query) const;

  // Elementwise nearest_distance, order preserved. May run queries on
  // multiple threads (capped by NAP_THREADS); results do not depend on the
  // partitioning.
  std::vector<std::size_t> batch_nearest(std::span<const BinaryPattern> queries) const;

 private:
  std::size_t dim_ = 0;
  std::size_t words_per_pattern_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

// Per-frame summary: counts[j] = number of the frame's patterns with bit j
// set. Enables the closed-form inter-frame mean pairwise Hamming distance.
struct FrameBitCounts {
  std::size_t dim = 0;
  std::vector<std::uint32_t> counts;
  std::size_t n_boxes = 0;
};

FrameBitCounts frame_bit_counts(std::span<const BinaryPattern> patterns);

// Mean Hamming distance over all cross pairs of two frames' patterns,
// computed from bit counts: per bit j the number of differing pairs is
// a[j]*(m-b[j]) + (n-a[j])*b[j]. The integer numerator equals the brute
// force double sum exactly.
double mean_pairwise_hamming(const FrameBitCounts& a, const FrameBitCounts& b);

}  // namespace nap
