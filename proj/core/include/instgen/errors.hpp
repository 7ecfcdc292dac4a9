#pragma once

#include <stdexcept>
#include <string>

namespace instgen {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text (parameter spaces, model files, instance files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that breaks an invariant (duplicate names, inverted bounds).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Generator model cannot be instantiated for a configuration.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Type mismatch while evaluating a constraint expression.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Solution payload that cannot be checked against the problem model.
class CheckError : public Error {
 public:
  using Error::Error;
};

/// Statistical test called with too few blocks or columns.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Borda aggregation is missing a (solver, instance) record.
class MissingRecord : public Error {
 public:
  using Error::Error;
};

}  // namespace instgen
