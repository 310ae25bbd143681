#pragma once

#include <stdexcept>
#include <string>

namespace torusfold {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: length mismatch, zero tau, empty sequence, bad axis.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Enumeration of a box would exceed the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic left the working width.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Folding is not injective on the relevant spectrum (strict policy).
class CollisionError : public Error {
 public:
  using Error::Error;
};

/// A certified grid would exceed the configured point budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Parse failures in the polynomial literal or config formats.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace torusfold
