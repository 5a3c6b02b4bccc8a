#pragma once

#include <stdexcept>
#include <string>

namespace moran {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed input (bad vertex id, negative weight, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A structural precondition on the graph does not hold (disconnected
/// support, missing self-loop, empty transition set, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds a configured capacity (e.g. exact solver limit).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Failure while decoding a serialized graph; `where` names the location.
class ParseError : public InputError {
 public:
  ParseError(const std::string& where, const std::string& what)
      : InputError(where.empty() ? what : where + ": " + what), where_(where) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace moran
