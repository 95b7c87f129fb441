#pragma once

#include <stdexcept>
#include <string>

namespace icct {

// Bad input: malformed files, invalid configs, violated data invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite likelihoods, failed sampler updates, and similar runtime faults.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace icct
