#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hwl {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the accepted domain (degree cap, negative order, bad grid...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested exactly at a logarithmic singularity.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

/// A requested abscissa or window lies outside the sampled grid.
class OutOfGrid : public Error {
 public:
  using Error::Error;
};

/// Not enough usable samples for a fit.
class TooFewPoints : public Error {
 public:
  using Error::Error;
};

/// The grid is too narrow for the signal to have decayed at its edges.
class GridTooNarrow : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `row()` is 1-based and counts the header line; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// JSON document does not match the report schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace hwl
