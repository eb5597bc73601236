#pragma once

#include <stdexcept>
#include <string>

namespace nap {

// Data/contract violations (bad files, dimension mismatches, invalid
// arguments). The CLI maps these to exit code 2.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nap
