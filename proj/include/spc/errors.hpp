#pragma once

#include <stdexcept>
#include <string>

namespace spc {

// Exception hierarchy used throughout the core library. The C API maps each
// type onto a distinct status code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class DegeneratePencil : public Error {
 public:
  using Error::Error;
};

class OrderTooSmall : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace spc
