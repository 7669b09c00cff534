#pragma once

#include <stdexcept>
#include <string>

namespace amhd {

/// A caller broke an operation's precondition (wrong space tag, non-monotone
/// time, non-solenoidal input, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An argument is outside the accepted domain (grid size, derivative order,
/// mismatched grids, trial budget, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A trial function or sampled input does not satisfy the analytic
/// hypotheses an inequality check relies on (decay, exponent ordering).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input/output failure while reading or writing configs, ledgers,
/// checkpoints or reports.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amhd
