#include "nap/pattern_bank.hpp"

#include <bit>
#include <string>

#include "nap/error.hpp"
#include "nap/parallel.hpp"

namespace nap {

PatternBank PatternBank::build(std::span<const BinaryPattern> patterns) {
  if (patterns.empty()) throw error("build_bank: empty pattern set");
  PatternBank bank;
  bank.dim_ = patterns.front().dim();
  bank.words_per_pattern_ = words_for_dim(bank.dim_);
  bank.count_ = patterns.size();
  bank.words_.reserve(bank.count_ * bank.words_per_pattern_);
  for (const auto& p : patterns) {
    if (p.dim() != bank.dim_)
      throw error("build_bank: dimension mismatch (" + std::to_string(p.dim()) + " vs " +
                  std::to_string(bank.dim_) + ")");
    bank.words_.insert(bank.words_.end(), p.words().begin(), p.words().end());
  }
  return bank;
}

BinaryPattern PatternBank::pattern(std::size_t i) const {
  const std::uint64_t* base = words_.data() + i * words_per_pattern_;
  return BinaryPattern::from_words(
      dim_, std::vector<std::uint64_t>(base, base + words_per_pattern_));
}

namespace {

// XOR-popcount over one pattern pair, unrolled by 4 words with an early
// exit per block once the running distance reaches `bound`.
inline std::size_t pair_distance_bounded(const std::uint64_t* p, const std::uint64_t* q,
                                         std::size_t wpp, std::size_t bound) {
  std::size_t acc = 0;
  std::size_t w = 0;
  for (; w + 4 <= wpp; w += 4) {
    const std::size_t block =
        static_cast<std::size_t>(std::popcount(p[w] ^ q[w])) +
        static_cast<std::size_t>(std::popcount(p[w + 1] ^ q[w + 1])) +
        static_cast<std::size_t>(std::popcount(p[w + 2] ^ q[w + 2])) +
        static_cast<std::size_t>(std::popcount(p[w + 3] ^ q[w + 3]));
    acc += block;
    if (acc >= bound) return acc;
  }
  for (; w < wpp; ++w) acc += static_cast<std::size_t>(std::popcount(p[w] ^ q[w]));
  return acc;
}

}  // namespace

std::size_t PatternBank::nearest_distance(const BinaryPattern& query) const {
  if (query.dim() != dim_)
    throw error("nearest_distance: dimension mismatch (" + std::to_string(query.dim()) +
                " vs bank dim " + std::to_string(dim_) + ")");
  const std::uint64_t* q = query.words().data();
  const std::size_t wpp = words_per_pattern_;
  std::size_t best = dim_ + 1;
  const std::uint64_t* p = words_.data();
  for (std::size_t i = 0; i < count_; ++i, p += wpp) {
    const std::size_t dist = pair_distance_bounded(p, q, wpp, best);
    if (dist < best) {
      best = dist;
      if (best == 0) return 0;
    }
  }
  return best;
}

std::vector<std::size_t> PatternBank::batch_nearest(
    std::span<const BinaryPattern> queries) const {
  for (const auto& q : queries)
    if (q.dim() != dim_)
      throw error("batch_nearest: dimension mismatch (" + std::to_string(q.dim()) +
                  " vs bank dim " + std::to_string(dim_) + ")");
  std::vector<std::size_t> out(queries.size());

  // Queries are tiled so one pass over the bank serves a whole block; the
  // bank streams from memory once per block instead of once per query.
  constexpr std::size_t kBlock = 64;
  const std::size_t n_blocks = (queries.size() + kBlock - 1) / kBlock;
  const std::size_t wpp = words_per_pattern_;
  parallel_for(n_blocks, [&](std::size_t block_begin, std::size_t block_end) {
    const std::uint64_t* query_words[kBlock];
    std::size_t best[kBlock];
    for (std::size_t b = block_begin; b < block_end; ++b) {
      const std::size_t q0 = b * kBlock;
      const std::size_t q1 = std::min(queries.size(), q0 + kBlock);
      const std::size_t width = q1 - q0;
      for (std::size_t j = 0; j < width; ++j) {
        query_words[j] = queries[q0 + j].words().data();
        best[j] = dim_ + 1;
      }
      const std::uint64_t* p = words_.data();
      for (std::size_t i = 0; i < count_; ++i, p += wpp) {
        for (std::size_t j = 0; j < width; ++j) {
          const std::size_t dist = pair_distance_bounded(p, query_words[j], wpp, best[j]);
          if (dist < best[j]) best[j] = dist;
        }
      }
      for (std::size_t j = 0; j < width; ++j) out[q0 + j] = best[j];
    }
  });
  return out;
}

FrameBitCounts frame_bit_counts(std::span<const BinaryPattern> patterns) {
  if (patterns.empty()) throw error("frame_bit_counts: empty pattern set");
  FrameBitCounts fc;
  fc.dim = patterns.front().dim();
  fc.counts.assign(fc.dim, 0);
  fc.n_boxes = patterns.size();
  for (const auto& p : patterns) {
    if (p.dim() != fc.dim) throw error("frame_bit_counts: dimension mismatch");
    for (std::size_t j = 0; j < fc.dim; ++j)
      fc.counts[j] += p.bit(j) ? 1u : 0u;
  }
  return fc;
}

double mean_pairwise_hamming(const FrameBitCounts& a, const FrameBitCounts& b) {
  if (a.dim != b.dim)
    throw error("mean_pairwise_hamming: dimension mismatch (" + std::to_string(a.dim) +
                " vs " + std::to_string(b.dim) + ")");
  if (a.n_boxes == 0 || b.n_boxes == 0)
    throw error("mean_pairwise_hamming: frame with zero boxes");
  const std::uint64_t n = a.n_boxes;
  const std::uint64_t m = b.n_boxes;
  std::uint64_t numerator = 0;
  for (std::size_t j = 0; j < a.dim; ++j) {
    const std::uint64_t ca = a.counts[j];
    const std::uint64_t cb = b.counts[j];
    numerator += ca * (m - cb) + (n - ca) * cb;
  }
  return static_cast<double>(numerator) / static_cast<double>(n * m);
}

}  // namespace nap
