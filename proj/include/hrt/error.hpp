#pragma once

#include <stdexcept>
#include <string>

namespace hrt {

/// Argument outside the mathematical domain of an operation (x <= 0, u not in (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Distribution family or parameter regime the method does not handle.
class UnsupportedFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A diagnostic metric is undefined for the given inputs (e.g. relative error at alpha = 0).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A reference computation could not reach its requested accuracy.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hrt
