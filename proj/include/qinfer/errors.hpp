#pragma once

#include <stdexcept>
#include <string>

namespace qinfer {

// Malformed arguments: dimension mismatch, out-of-range parameters,
// invalid operators.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition does not hold, e.g. generators that should
// commute do not.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Conditioning on a proposition with (numerically) zero probability.
class ConditioningOnNull : public std::domain_error {
 public:
  ConditioningOnNull(std::string factor, double trace);

  const std::string& factor() const { return factor_; }
  double trace() const { return trace_; }

 private:
  std::string factor_;
  double trace_;
};

// A sampling run accepted no trials, so no conditional estimate exists.
class OracleStarvation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qinfer
