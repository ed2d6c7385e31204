#pragma once

#include <stdexcept>
#include <string>

namespace msent {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operator/state dimensions or slot selections do not line up.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented invariant (non-Hermitian, incomplete POVM, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The requested state or gate cannot be expressed on the chosen backend.
class RepresentationError : public Error {
 public:
  using Error::Error;
};

// Parameter outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace msent
