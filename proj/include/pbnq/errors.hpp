#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbnq {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operand shapes are incompatible for the requested operation.
class DimensionError : public Error {
  using Error::Error;
};

// A requested (or intermediate) matrix dimension exceeds the hard cap,
// or an enumeration oracle was asked for a search space beyond its guard.
class SizeGuardError : public Error {
  using Error::Error;
};

// An input value violates a documented invariant (probability sums,
// index ranges, inconsistent tables, ...).
class ValidationError : public Error {
  using Error::Error;
};

// Boolean expression syntax error; `position` is the 0-based byte offset
// into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position(position) {}
  std::size_t position;
};

// Malformed or inconsistent structured input file.
class SchemaError : public Error {
  using Error::Error;
};

}  // namespace pbnq
