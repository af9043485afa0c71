#pragma once

#include "memkern/closed_dynamics.hpp"
#include "memkern/spectral_model.hpp"
#include "memkern/time_grid.hpp"

namespace memkern {

/// The one system where everything is known in closed form: H = sigma_x,
/// A = sigma_z, started in the up state.  Closed evolution gives
/// a(t) = cos(2t); the dephasing dynamics obeys the damped-oscillator
/// equation atilde'' + gamma atilde' + 4 atilde = 0 with atilde(0) = a(0),
/// atilde'(0) = 0, i.e. a constant memory kernel K = 4 damped to
/// 4 e^{-gamma tau}.

/// Energies {-1, +1} (eigenvalues of sigma_x), half_width 1.
Spectrum two_level_spectrum();

/// sigma_z written in the sigma_x eigenbasis, with its eigendecomposition.
EthObservable two_level_observable();

/// Index of the observable eigenvalue +1 ("up") for use with
/// DiagonalState::pure.
std::size_t two_level_up_index();

/// Solution of z'' + gamma z' + 4 z = 0, z(0) = z0, z'(0) = 0, valid in the
/// underdamped, critical and overdamped regimes.
Signal damped_oscillator_solution(double gamma, double z0, const TimeGrid& grid);

}  // namespace memkern
