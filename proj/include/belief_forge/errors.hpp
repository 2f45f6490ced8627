#pragma once

#include <stdexcept>
#include <string>

namespace belief_forge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No belief function satisfies the given constraints.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// An operation refused to run because a size cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace belief_forge
