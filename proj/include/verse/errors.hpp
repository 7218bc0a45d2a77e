#pragma once

#include <stdexcept>
#include <string>

namespace verse {

// Raised when an operation would exceed a configured resource cap, e.g. the
// exact-SimRank node limit. Mapped to its own CLI exit code.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace verse
