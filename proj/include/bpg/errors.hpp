#pragma once

#include <stdexcept>
#include <string>

namespace bpg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Non-finite data or a failed factorization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

/// Input that makes a normalized quantity undefined (zero trace, zero norm).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A BP message collapsed to zero, i.e. the state has a null slice.
class DegenerateMessage : public Error {
 public:
  using Error::Error;
};

class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// Exact contraction would exceed the configured size limit.
class TooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace bpg
