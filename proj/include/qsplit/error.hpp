#pragma once

#include <stdexcept>
#include <string>

namespace qsplit {

// Argument outside the mathematical domain of a function (u <= 0, nu <= 0, p < 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a documented precondition (non-fixed node, bad grid, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative or adaptive routine could not meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Measurement branch with vanishing probability.
class ImpossibleOutcome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsplit
