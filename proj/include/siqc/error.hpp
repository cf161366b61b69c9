#pragma once

#include <stdexcept>
#include <string>

namespace siqc {

/// Invalid parameters, malformed documents, or violated preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-posed query that has no feasible answer (e.g. a signal that never
/// clears the noise floor).
class NotMeasurable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request exceeds a configured size cap.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace siqc
