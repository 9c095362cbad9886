#ifndef PARABOUND_ERROR_HPP
#define PARABOUND_ERROR_HPP

#include <stdexcept>
#include <string>

namespace parabound {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A formula was requested outside the parameter regime it is stated for,
/// e.g. an exponent condition fails or a hypothesis of the estimate is violated.
struct RegimeError : Error {
  using Error::Error;
};

/// A Sobolev/trace constant required by a bound formula is not present in the
/// registry. Lookups never fall back silently.
struct MissingConstantError : Error {
  using Error::Error;
};

/// Invalid geometry input (degenerate extents, empty boundary selection, ...).
struct GeometryError : Error {
  using Error::Error;
};

/// Nonlinear or linear solve failure; carries the step index in the message.
struct SolverError : Error {
  using Error::Error;
};

/// Malformed configuration file or unknown preset name.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace parabound

#endif
