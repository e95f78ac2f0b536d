#pragma once

#include <stdexcept>
#include <string>

namespace hlab {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** A precondition on parameters or inputs was violated. */
class ValidationError : public Error {
 public:
  using Error::Error;
};

/** Inputs carry spectral content outside the alias-safe band. */
class AliasingError : public Error {
 public:
  using Error::Error;
};

/** A memory or work budget would be exceeded. */
class BudgetError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace hlab
