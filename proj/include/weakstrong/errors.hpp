#pragma once

#include <stdexcept>
#include <string>

namespace weakstrong {

// Base of every error raised by the library. The CLI maps ValidationError to
// exit code 2 and every other Error to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the documented domain (bad angle, empty list, bad grid...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// theta = 0: the pre- and post-selected states are orthogonal and the weak
// value diverges.
class PoleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateState : public Error {
 public:
  using Error::Error;
};

class NonInvertible : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionTooSmall : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

class PostSelectionFailed : public Error {
 public:
  using Error::Error;
};

class KOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientKRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class LinearRegimeViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace weakstrong
