#pragma once

#include <stdexcept>
#include <string>

namespace fwnc {

/// Base of every exception thrown by the library. `exit_code()` is the
/// process status the command-line runner reports for it.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 2; }
};

/// Caller violated a precondition (dimension mismatch, infeasible point,
/// missing metadata, malformed configuration).
class UsageError : public Error {
public:
  using Error::Error;
};

/// Query the library deliberately does not answer (e.g. convex hull
/// membership above three dimensions).
class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// A quantity that is nonnegative in exact arithmetic came out clearly
/// negative; indicates a defective oracle rather than round-off.
class InternalError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Non-finite value produced during a run.
class NumericError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Configuration text could not be turned into a valid experiment.
class ParseError : public UsageError {
public:
  using UsageError::UsageError;
};

}  // namespace fwnc
