#pragma once

#include <stdexcept>
#include <string>

namespace ccga {

/// Malformed arguments: wrong shapes, out-of-range parameters, bad config.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem or lemma hypothesis does not hold for the supplied values.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An internal invariant broke. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Exhaustive enumeration was refused; the caller should fall back to Monte Carlo.
class EnumerationCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace ccga
