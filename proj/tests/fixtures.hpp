// Shared fixture builders for CLI and acceptance tests.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "nap/kitti_io.hpp"

namespace fixtures {

// Values whose extract_pattern equals exactly the given bit string: set
// bits get distinct positive values, the rest zero (zeros survive the cut
// only as 0-bits).
inline std::vector<float> values_for_pattern(const std::string& bits) {
  std::vector<float> v(bits.size(), 0.0f);
  for (std::size_t j = 0; j < bits.size(); ++j)
    if (bits[j] == '1') v[j] = static_cast<float>(bits.size() - j);
  return v;
}

inline nap::ActivationRecord record(std::string frame, std::string box, std::string layer,
                                    nap::BoxRole role, const std::string& bits,
                                    std::optional<double> score = std::nullopt) {
  nap::ActivationRecord rec;
  rec.frame_id = std::move(frame);
  rec.box_id = std::move(box);
  rec.layer_id = std::move(layer);
  rec.role = role;
  rec.score = score;
  rec.values = values_for_pattern(bits);
  return rec;
}

// Three target frames over an 8-bit pattern space with a 2-pattern gt bank.
// Entropies: H(A)=ln 3 > H(B)=ln 2 > H(C)=H({2,2,3}); frame C's patterns
// are far from A's, B's are near, so selection with N=2 picks [A, C].
inline std::vector<nap::ActivationRecord> three_frame_dump() {
  using nap::BoxRole;
  std::vector<nap::ActivationRecord> recs;
  recs.push_back(record("src", "g1", "roi.0", BoxRole::gt, "11110000"));
  recs.push_back(record("src", "g2", "roi.0", BoxRole::gt, "00001111"));

  recs.push_back(record("A", "a1", "roi.0", BoxRole::det, "11110000", 0.9));  // D=0
  recs.push_back(record("A", "a2", "roi.0", BoxRole::det, "11100000", 0.8));  // D=1
  recs.push_back(record("A", "a3", "roi.0", BoxRole::det, "11000000", 0.7));  // D=2

  recs.push_back(record("B", "b1", "roi.0", BoxRole::det, "11110000", 0.9));  // D=0
  recs.push_back(record("B", "b2", "roi.0", BoxRole::det, "11100000", 0.6));  // D=1

  recs.push_back(record("C", "c1", "roi.0", BoxRole::det, "00001100", 0.9));  // D=2
  recs.push_back(record("C", "c2", "roi.0", BoxRole::det, "00001100", 0.5));  // D=2
  recs.push_back(record("C", "c3", "roi.0", BoxRole::det, "00001000", 0.4));  // D=3
  return recs;
}

// Two layers: roi.0 separates TP (near bank) from FP (far) perfectly,
// roi.1 is inverted.
inline std::vector<nap::ActivationRecord> two_layer_dump() {
  using nap::BoxRole;
  std::vector<nap::ActivationRecord> recs;
  recs.push_back(record("s", "g1", "roi.0", BoxRole::gt, "11110000"));
  recs.push_back(record("s", "t1", "roi.0", BoxRole::tp, "11110000"));
  recs.push_back(record("s", "t2", "roi.0", BoxRole::tp, "11100000"));
  recs.push_back(record("s", "f1", "roi.0", BoxRole::fp, "00001111"));
  recs.push_back(record("s", "f2", "roi.0", BoxRole::fp, "00001110"));

  recs.push_back(record("s", "g1", "roi.1", BoxRole::gt, "11110000"));
  recs.push_back(record("s", "t1", "roi.1", BoxRole::tp, "00001111"));
  recs.push_back(record("s", "f1", "roi.1", BoxRole::fp, "11110000"));
  return recs;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Runs the CLI with sh quoting already applied by the caller; returns the
// subprocess exit status.
inline int run_cli(const std::string& cli_path, const std::string& args,
                   const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + "\"" + cli_path + "\" " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace fixtures
