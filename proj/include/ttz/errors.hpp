#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttz {

/// Malformed expression text; position() is the 0-based offset of the offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Runtime domain failure while evaluating (division by zero, log 0, z = 0 in a Laurent symbol).
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration or symbol definition.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not deliver its contract (non-convergence, z on a rejected set).
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ttz
