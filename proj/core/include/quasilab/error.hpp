#pragma once

#include <stdexcept>
#include <string>

namespace quasilab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's precondition does not hold (bad input, rank failure,
/// non-semi-closed window, ...). The CLI maps this to exit code 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operands live in different algebras.
class AlgebraMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Inversion of a zero divisor / singular matrix.
class NotInvertible : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A membership or sign test fell inside the numeric guard band and could
/// not be decided exactly.
class AmbiguousBoundary : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Malformed literal or text file.
class ParseError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A bounded search finished without a witness. This is not a proof of
/// nonexistence. The CLI maps this to exit code 3.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace quasilab
