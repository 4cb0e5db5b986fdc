#pragma once

#include <stdexcept>
#include <string>

namespace qlow {

/// Base class for every error raised by the library. The CLI maps the
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Mismatched lengths or dimensions between operands.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// A precondition on an argument's value does not hold.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A requested size exceeds a configured cap.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Non-finite results, failed convergence.
class NumericError : public Error {
  public:
    using Error::Error;
};

/// Invalid configuration or manifest content.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// An operation is not defined for the chosen mode or Laplacian kind.
class ModeError : public Error {
  public:
    using Error::Error;
};

} // namespace qlow
