#pragma once

#include <stdexcept>
#include <string>

namespace cavmet {

/// Violation of a numerical validity guard: truncation too small, operator
/// used outside its trusted subspace, state that lost normalization.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or argument values.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cavmet
