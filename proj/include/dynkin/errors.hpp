#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dynkin {

// Input that fails a structural or game-level check. Carries every
// individual diagnostic so callers can print all of them at once.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what, std::vector<std::string> details = {})
      : std::runtime_error(what), details_(std::move(details)) {}

  const std::vector<std::string>& details() const { return details_; }

 private:
  std::vector<std::string> details_;
};

// An exhaustive enumeration would exceed its configured cap.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynkin
