#pragma once

#include <stdexcept>
#include <string>

namespace pmlda {

/// Malformed or inconsistent input (bad shapes, invalid parameters, unreadable files).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value or otherwise broke down numerically.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace pmlda
