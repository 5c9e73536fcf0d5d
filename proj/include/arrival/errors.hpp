#pragma once

#include <stdexcept>
#include <string>

namespace arrival {

/// Invalid or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// u at or beyond Omega(inf) when inverting the integrated intensity.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A numerical procedure did not reach its tolerance; carries the achieved estimate.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace arrival
