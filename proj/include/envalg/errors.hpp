#pragma once

#include <stdexcept>
#include <string>

namespace envalg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid user input (files, density matrices, models).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A verified mathematical property failed beyond tolerance.
class CheckFailure : public Error {
 public:
  using Error::Error;
};

/// A numerical decision (rank, clustering, integrality) could not be made
/// reliably at the configured tolerance.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

}  // namespace envalg
