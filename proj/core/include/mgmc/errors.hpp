#pragma once

#include <stdexcept>
#include <string>

namespace mgmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A triangular system or splitting matrix has a zero pivot.
class SingularSplitting : public Error {
public:
  using Error::Error;
};

/// M + M^T - A is not positive definite, so the smoother noise cannot be drawn.
class InvalidSplitting : public Error {
public:
  using Error::Error;
};

class NotSpd : public Error {
public:
  using Error::Error;
};

/// Iterative routine failed to reach tolerance, or a series diverged.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Dense oracle requested for a problem above the configured size cap.
class SizeCapExceeded : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An observation ball contains no interior grid vertex.
class ResolutionTooCoarse : public Error {
public:
  using Error::Error;
};

/// The beta x beta Woodbury capacitance matrix is singular.
class IllPosedObservations : public Error {
public:
  using Error::Error;
};

/// A sampler was used without the precomputation it needs.
class StateError : public Error {
public:
  using Error::Error;
};

/// Wolff windowing found no admissible window.
class UnreliableIact : public Error {
public:
  using Error::Error;
};

class RateUndefined : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace mgmc
