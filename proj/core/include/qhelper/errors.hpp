#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qhelper {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A state, channel or config violates one of its invariants.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Label collision, unknown label, or overlapping label sets.
class LayoutError : public Error {
public:
  using Error::Error;
};

/// Incompatible or overflowing dimensions.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Syntax error in RI text; carries the byte offset of the failure.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// A coefficient or label cannot be resolved against the bound state.
class EvalError : public Error {
public:
  using Error::Error;
};

}  // namespace qhelper
