#pragma once

#include <stdexcept>
#include <string>

namespace padic_heights {

// Raised when an input lies outside the mathematical domain of an operation
// (bad reduction, non-residue square root, Condition 1 violations, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when the working precision is too small to certify a result.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what, long required = -1)
      : std::runtime_error(what), required_(required) {}
  long required() const { return required_; }

 private:
  long required_;
};

}  // namespace padic_heights
