#pragma once

#include <stdexcept>
#include <string>

namespace dispersive {

/// Base of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A grid is too coarse for the requested stencil.
class SizingError : public Error {
public:
    using Error::Error;
};

/// Operands live on different grids or have mismatched lengths.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid scalar parameter (negative radius, k < 1, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Singular factorization, non-finite values, or a failed guard.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace dispersive
