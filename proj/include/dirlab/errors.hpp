#pragma once

#include <stdexcept>
#include <string>

namespace dirlab {

/// Raised when an argument violates an operation's precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a construction fails one of its own certificates
/// (e.g. a disk family that is not disjoint for the given parameters).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computed quantity contradicts an analytic guarantee that
/// holds in exact arithmetic, which points at lost precision.
class NumericIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace detail
}  // namespace dirlab
