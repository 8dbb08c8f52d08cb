#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpmm {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape or size of an operand is unusable (zero dimension, mismatch, bad view window).
struct DimensionError : Error {
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (negative sqrt operand,
/// zero reference in a relative-error computation, non-finite operand).
struct DomainError : Error {
  using Error::Error;
};

/// Division by zero in scalar arithmetic or a zero pivot during elimination.
struct SingularError : Error {
  explicit SingularError(const std::string& what, std::size_t pivot_index = 0)
      : Error(what), pivot_index(pivot_index) {}
  /// 1-based pivot index for elimination failures, 0 for scalar division.
  std::size_t pivot_index;
};

/// Malformed text input; `position` is the byte offset of the first bad character.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"), position(position) {}
  std::size_t position;
};

/// A requested metric has no defined value (e.g. relative error against an all-zero reference).
struct UndefinedMetricError : Error {
  using Error::Error;
};

/// File could not be read or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace mpmm
