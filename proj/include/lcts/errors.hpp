#pragma once

#include <stdexcept>
#include <string>

namespace lcts {

// Constants of a likelihood family violate m, nu > 0 (or similar).
class InvalidFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad user-facing configuration: CLI flags, config files, sampler settings.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcts
