#pragma once

#include <stdexcept>

namespace ocx {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid hyperparameter or configuration value.
struct ParameterError : Error {
  using Error::Error;
};

// Mismatched dimensions between inputs.
struct ShapeError : Error {
  using Error::Error;
};

// Argument outside a function's mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

// Every nearest-neighbour distance vanishes at the requested quantile.
struct DegenerateBandwidthError : Error {
  using Error::Error;
};

// Gradient requested where it does not exist.
struct SingularPointError : Error {
  using Error::Error;
};

// Flip curve starts at zero score, so normalisation is undefined.
struct UndefinedAucError : Error {
  using Error::Error;
};

// File access or format problem.
struct IoError : Error {
  using Error::Error;
};

}  // namespace ocx
