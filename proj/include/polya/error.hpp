#pragma once

#include <stdexcept>
#include <string>

namespace polya {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied an out-of-range or malformed argument.
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// An operation's documented precondition does not hold for its input.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A state or result breaks one of the model invariants.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

/// The requested computation exceeds a hard resource bound.
class ResourceBoundError : public Error {
public:
  using Error::Error;
};

/// Configuration text or files are invalid or inconsistent with each other.
class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace polya
