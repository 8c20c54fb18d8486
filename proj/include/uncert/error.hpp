#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uncert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed functional source. `position()` is the 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnboundParameterError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Evaluation outside the domain of a function (log of a non-positive number, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gradient requested where the functional has a kink (abs at zero, unpinned).
class NotDifferentiableError : public Error {
 public:
  using Error::Error;
};

/// A moment triple or (u, v, w) point outside the physical domain.
class InvalidMomentsError : public Error {
 public:
  using Error::Error;
};

/// Unknown catalog name, parameter or key supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace uncert
