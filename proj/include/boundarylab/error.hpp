#pragma once

#include <stdexcept>
#include <string>

namespace boundarylab {

// Base for every error raised by the library. Callers that only care about
// "something in boundarylab went wrong" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violated a documented precondition (probability outside (0,1),
// negative count, mismatched dimensions, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An estimate has no value on the given data (e.g. s/n with n = 0).
class UndefinedEstimate : public Error {
 public:
  using Error::Error;
};

// A likelihood-ratio evaluation was requested at p = 0 or p = 1.
class BoundaryEvaluation : public Error {
 public:
  using Error::Error;
};

// The response vector contains a single class; the logistic fit is not
// identifiable.
class OneClassError : public Error {
 public:
  using Error::Error;
};

// An SPRT that already reached a decision was stepped again.
class FrozenState : public Error {
 public:
  using Error::Error;
};

// Input data failed schema or content validation.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace boundarylab
