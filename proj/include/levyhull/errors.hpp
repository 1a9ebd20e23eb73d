#pragma once

#include <stdexcept>
#include <string>

namespace levyhull {

/// Invalid argument to a sampler, geometry routine or estimator.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain where a closed-form expression holds.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input has the wrong (affine) dimension for the requested operation.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested work exceeds a hard cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levyhull
