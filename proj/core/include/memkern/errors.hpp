#pragma once

#include <stdexcept>
#include <string>

namespace memkern {

/// Base class for all failures this library raises on purpose; anything not
/// derived from Error (std::invalid_argument, std::ios_base::failure, ...)
/// indicates a violated precondition or an I/O problem.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A spectral density came out negative beyond rounding noise, so the
/// synthesis filter sqrt(density/level_density) has no real value.
struct NegativeSpectralDensity final : Error {
  using Error::Error;
};

/// The synthesized observable has (numerically) degenerate eigenvalues and
/// its eigenbasis is not unique.
struct DegenerateObservable final : Error {
  using Error::Error;
};

/// A requested initial expectation value is too close to zero; dividing the
/// relaxation signal by it would only amplify noise.
struct ProbeTooSmall final : Error {
  using Error::Error;
};

/// A propagated state acquired a negative eigenvalue beyond tolerance; the
/// integration step is too coarse for the requested rates.
struct PositivityLost final : Error {
  using Error::Error;
};

/// A dense-state operation was asked for at a dimension it is not meant for.
struct DimensionTooLarge final : Error {
  using Error::Error;
};

/// Kernel extraction needs a signal with a(0) bounded away from zero.
struct SignalStartsAtZero final : Error {
  using Error::Error;
};

/// The deconvolution blew up (kernel values grew by many orders of
/// magnitude); the input signal is too noisy or the step too coarse.
struct ExtractionUnstable final : Error {
  using Error::Error;
};

/// An integral-equation step would be unstable at the requested step size.
struct StepTooLarge final : Error {
  using Error::Error;
};

/// An observable with Tr{A^2} = 0 has no normalized autocorrelation.
struct ZeroNormObservable final : Error {
  using Error::Error;
};

}  // namespace memkern
