#pragma once

#include <stdexcept>
#include <string>

namespace bfree {

/// Precondition or argument outside an operation's domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Not enough cached data (e.g. continued-fraction prefix too short).
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// A configured budget (iteration cap, digit budget) ran out before a
/// decision could be made.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A least-squares fit that has no meaning on the supplied data.
class UndefinedFit : public DomainError {
public:
  using DomainError::DomainError;
};

/// An invariant that the algorithm guarantees did not hold. Indicates a bug.
class InternalConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace bfree
