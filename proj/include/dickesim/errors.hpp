#pragma once

#include <stdexcept>
#include <string>

namespace dickesim {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A parameter is out of its documented range. The message names the field.
struct InvalidArgs : Error {
  using Error::Error;
};

// A requested basis or matrix would exceed the configured dimension cap.
struct DimensionCap : Error {
  using Error::Error;
};

// A (pattern, phonon) pair does not belong to the requested sector.
struct NotInSector : Error {
  using Error::Error;
};

// Two states (or a state and an operator) live on different bases.
struct BasisMismatch : Error {
  using Error::Error;
};

// The adaptive integrator could not meet its tolerances.
struct IntegrationFailure : Error {
  using Error::Error;
};

}  // namespace dickesim
