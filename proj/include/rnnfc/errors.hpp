#pragma once

#include <stdexcept>
#include <string>

namespace rnnfc {

// Caller violated a precondition (bad shape, bad range, bad flag).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data could not be parsed, aligned or windowed.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

// File structure is wrong (missing header, bad date columns).
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

// Tables disagree on their set of locations or dates.
class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

class RangeError : public DataError {
 public:
  using DataError::DataError;
};

// A computation produced NaN/Inf.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rnnfc
