#pragma once

#include <stdexcept>
#include <string>

namespace readability {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid caller-supplied parameter (radius, ideal angle, strip width, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed or unreadable input data: files, layouts, degenerate geometry.
class InputError : public Error {
 public:
  using Error::Error;
};

// Table schema violations in the dataflow layer and report documents.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// An internal invariant did not hold. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace readability
