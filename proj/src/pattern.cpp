#include "nap/pattern.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "nap/error.hpp"

namespace nap {

namespace {

void check_pad_bits(std::size_t dim, const std::vector<std::uint64_t>& words) {
  if (words.size() != words_for_dim(dim))
    throw error("pattern word count does not match dim " + std::to_string(dim));
  const std::size_t tail = dim & 63;
  if (tail != 0) {
    const std::uint64_t mask = ~((std::uint64_t{1} << tail) - 1);
    if (words.back() & mask) throw error("pattern pad bits above dim must be zero");
  }
}

}  // namespace

BinaryPattern BinaryPattern::from_words(std::size_t dim, std::vector<std::uint64_t> words) {
  if (dim == 0) throw error("pattern dim must be >= 1");
  check_pad_bits(dim, words);
  BinaryPattern p;
  p.dim_ = dim;
  p.words_ = std::move(words);
  return p;
}

BinaryPattern BinaryPattern::from_string(const std::string& bits) {
  if (bits.empty()) throw error("pattern dim must be >= 1");
  std::vector<std::uint64_t> words(words_for_dim(bits.size()), 0);
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] == '1')
      words[j >> 6] |= std::uint64_t{1} << (j & 63);
    else if (bits[j] != '0')
      throw error("pattern string must contain only '0' and '1'");
  }
  return from_words(bits.size(), std::move(words));
}

std::size_t BinaryPattern::popcount() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::string BinaryPattern::to_string() const {
  std::string s(dim_, '0');
  for (std::size_t j = 0; j < dim_; ++j)
    if (bit(j)) s[j] = '1';
  return s;
}

std::vector<float> clip_top_half(std::span<const float> values) {
  if (values.empty()) throw error("clip_top_half: empty vector");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw error("clip_top_half: non-finite value at index " + std::to_string(i));

  const std::size_t d = values.size();
  const std::size_t drop = d / 2;
  std::vector<float> out(values.begin(), values.end());
  if (drop == 0) return out;

  // Smallest `drop` entries by value; equal values drop the higher index
  // first so the kept set prefers lower indices.
  std::vector<std::uint32_t> order(d);
  std::iota(order.begin(), order.end(), 0u);
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(drop - 1),
                   order.end(), [&](std::uint32_t a, std::uint32_t b) {
                     if (values[a] != values[b]) return values[a] < values[b];
                     return a > b;
                   });
  for (std::size_t i = 0; i < drop; ++i) out[order[i]] = 0.0f;
  return out;
}

BinaryPattern binarize(std::span<const float> clipped) {
  if (clipped.empty()) throw error("binarize: empty vector");
  std::vector<std::uint64_t> words(words_for_dim(clipped.size()), 0);
  for (std::size_t j = 0; j < clipped.size(); ++j)
    if (clipped[j] > 0.0f) words[j >> 6] |= std::uint64_t{1} << (j & 63);
  return BinaryPattern::from_words(clipped.size(), std::move(words));
}

BinaryPattern extract_pattern(std::span<const float> values) {
  const std::vector<float> clipped = clip_top_half(values);
  return binarize(clipped);
}

std::size_t hamming(const BinaryPattern& a, const BinaryPattern& b) {
  if (a.dim() != b.dim())
    throw error("hamming: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                std::to_string(b.dim()) + ")");
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i)
    n += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return n;
}

namespace {

void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class ByteReader {
 public:
  ByteReader(const std::string& data, const std::string& what)
      : data_(data), what_(what) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32le() {
    const char* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64le() {
    const char* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }
  const char* take(std::size_t n) {
    if (pos_ + n > data_.size()) throw error(what_ + ": truncated file");
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  const std::string& data_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

}  // namespace

void write_pattern_file(const std::filesystem::path& path,
                        std::span<const BinaryPattern> patterns) {
  if (patterns.empty()) throw error("write_pattern_file: no patterns");
  const std::size_t dim = patterns.front().dim();
  for (const auto& p : patterns)
    if (p.dim() != dim) throw error("write_pattern_file: mixed pattern dims");

  std::string out;
  out += "NAPB";
  out.push_back(1);  // version
  put_u32le(out, static_cast<std::uint32_t>(dim));
  put_u64le(out, patterns.size());
  for (const auto& p : patterns)
    for (std::uint64_t w : p.words()) put_u64le(out, w);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw error("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw error("write failed: " + path.string());
}

std::vector<BinaryPattern> read_pattern_file(const std::filesystem::path& path) {
  const std::string data = read_all(path);
  ByteReader r(data, path.string());
  if (std::string(r.take(4), 4) != "NAPB") throw error(path.string() + ": bad magic, expected NAPB");
  if (r.u8() != 1) throw error(path.string() + ": unsupported NAPB version");
  const std::uint32_t dim = r.u32le();
  if (dim == 0) throw error(path.string() + ": dim must be >= 1");
  const std::uint64_t count = r.u64le();
  const std::size_t wpp = words_for_dim(dim);

  std::vector<BinaryPattern> patterns;
  patterns.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<std::uint64_t> words(wpp);
    for (std::size_t w = 0; w < wpp; ++w) words[w] = r.u64le();
    patterns.push_back(BinaryPattern::from_words(dim, std::move(words)));
  }
  if (!r.done()) throw error(path.string() + ": trailing bytes after pattern data");
  return patterns;
}

}  // namespace nap
