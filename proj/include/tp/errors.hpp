#pragma once

#include <stdexcept>
#include <string>

namespace tp {

// Every failure raised by the library carries a stable kind tag
// (e.g. "NotUnimodular") next to the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace tp
