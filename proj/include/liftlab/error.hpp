#pragma once

#include <stdexcept>
#include <string>

namespace liftlab {

// Bad argument or precondition violation (CLI exit code 2).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A bound exceeds what the desk-scale kernels accept (CLI exit code 3).
class InfeasibleBound : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact integer arithmetic left the guard range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace liftlab
