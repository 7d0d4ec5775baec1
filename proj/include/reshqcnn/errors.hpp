#pragma once

#include <stdexcept>
#include <string>

namespace reshqcnn {

/// Shapes or qubit counts that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition on a value (Hermiticity, unitarity, ...) failed.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid user-facing configuration (gamma > 0, unsupported depth, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reshqcnn
