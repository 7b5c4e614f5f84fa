#pragma once

#include <stdexcept>
#include <string>

namespace cstrip {

// Input rejected before any computation started.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solver or factorization did not deliver.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual = -1.0)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// Special-function evaluation left the representable range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

}  // namespace cstrip
