#pragma once

#include <stdexcept>
#include <string>

namespace covpkit {

/// Malformed or out-of-contract input (bad shapes, parameters, literals).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded search ran out of budget before it could answer.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace covpkit
