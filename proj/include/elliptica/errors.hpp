#pragma once

#include <stdexcept>
#include <string>

namespace elliptica {

/// Raised when a query lands too close to a spectral or alcove boundary for
/// the requested decision to be numerically stable.  The CLI maps this to
/// exit code 2.
class BoundaryUnstableError : public std::runtime_error {
 public:
  explicit BoundaryUnstableError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised when two independent computation routes disagree beyond tolerance.
/// This always indicates a bug, never a property of the input.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace elliptica
