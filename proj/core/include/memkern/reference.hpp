#pragma once

#include <string>
#include <string_view>

#include "memkern/time_grid.hpp"

namespace memkern {

/// The four analytic relaxation shapes used as targets for ensemble
/// synthesis.  Each g is even, g(0) = 1, and has a nonnegative Fourier
/// transform, so it can serve as a correlation function.
enum class ReferenceKind {
  Exponential,  // g(t) = exp(-(ln 2 / tau) |t|)              (half-life tau)
  Oscillation,  // g(t) = cos(2 pi t / tau) exp(-|t| / (2 tau))
  Linear,       // g(t) = 1 - |t| / (2 tau) for |t| <= 2 tau, else 0
  Recurrence,   // g(t) = e^{-t^2/v} + (e^{-(t-tau)^2/v} + e^{-(t+tau)^2/v})/2
};

const char* to_string(ReferenceKind kind);
ReferenceKind reference_kind_from_string(std::string_view name);

struct ReferenceFunction {
  ReferenceKind kind = ReferenceKind::Exponential;
  double tau = 10.0;  // characteristic time of the shape
  double v = 0.016;   // squared width of the Recurrence Gaussians

  /// g(t); even in t by construction.
  double evaluate(double t) const;

  /// Fourier transform  ghat(omega) = Int g(t) e^{-i omega t} dt  in closed
  /// form; real, even and nonnegative for every kind.  Tiny negative values
  /// from rounding are clamped to zero; a value below -1e-9 * ghat(0) throws
  /// NegativeSpectralDensity since it cannot be rounding noise.
  double spectral_density(double omega) const;

  void validate() const;  // throws std::invalid_argument
};

/// Sample g over a grid.
Signal sample_reference(const ReferenceFunction& ref, const TimeGrid& grid);

}  // namespace memkern
