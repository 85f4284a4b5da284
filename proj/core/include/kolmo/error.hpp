#pragma once

#include <stdexcept>
#include <string>

namespace kolmo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated (bad argument, shape mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its contract (singular solve,
/// stagnation, non-finite state).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The input is well formed but degenerate for the requested operation, e.g. a
/// common kernel of dimension two. Reports map this to "inconclusive".
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

}  // namespace kolmo
