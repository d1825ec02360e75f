#pragma once

#include <stdexcept>

namespace affinv {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands live in different algebras, dimensions or grids.
struct MismatchError : Error {
  using Error::Error;
};

/// Commutator of candidate basis matrices leaves their span.
struct NotClosedError : Error {
  using Error::Error;
};

/// Bilinear form singular beyond tolerance.
struct DegenerateFormError : Error {
  using Error::Error;
};

/// Grid too coarse for the requested band (Nyquist violation).
struct AliasError : Error {
  using Error::Error;
};

/// Samples fail the group membership tolerance.
struct ConstraintViolationError : Error {
  using Error::Error;
};

/// Operation undefined at level k = 0.
struct DivisionByCenterError : Error {
  using Error::Error;
};

/// Invalid runner configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace affinv
