#pragma once

#include <stdexcept>
#include <string>

namespace klhull {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class NotPositiveSemidefinite : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Hull point does not satisfy sum(a) == 1, i.e. the map was not normalized
// to sum(Q_i) == I before extracting the point from its witness.
class NotPreconditioned : public Error {
 public:
  using Error::Error;
};

// An internal invariant was broken upstream (e.g. <Q_i, X> <= 0).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace klhull
