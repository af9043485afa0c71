#pragma once

#include <utility>
#include <vector>

#include "memkern/spectral_model.hpp"
#include "memkern/time_grid.hpp"

namespace memkern {

/// A state diagonal in the observable eigenbasis: rho = sum_j w_j |j><j|
/// with |j> the eigenvectors of A.  Such states are exactly the stationary
/// points of pure dephasing, which is why every experiment starts from one.
struct DiagonalState {
  Eigen::VectorXd weights;  // nonnegative, sum 1

  static DiagonalState pure(std::size_t dimension, std::size_t level);
  std::size_t dimension() const { return static_cast<std::size_t>(weights.size()); }
  void validate() const;  // throws std::invalid_argument
};

/// <A>(t) under the bare Hamiltonian, evaluated exactly per time point from
/// the spectral decomposition (no time stepping, no accumulated error).
Signal expectation_closed(const Spectrum& spectrum, const EthObservable& observable,
                          const DiagonalState& state, const TimeGrid& grid);

/// Same evaluation for a batch of pure states |j> given by observable
/// eigenvector indices; one pass over the eigenbasis per time point.
std::vector<Signal> expectation_closed_pure(const Spectrum& spectrum,
                                            const EthObservable& observable,
                                            const std::vector<std::size_t>& levels,
                                            const TimeGrid& grid);

/// Normalized equilibrium autocorrelation
///   C(t) = sum_{mn} |a_mn|^2 cos((E_m - E_n) t) / sum_{mn} |a_mn|^2,
/// so C(0) = 1 exactly.  Throws ZeroNormObservable when A vanishes.
Signal autocorrelation(const Spectrum& spectrum, const EthObservable& observable,
                       const TimeGrid& grid);

/// Deviation of one relaxation signal from the collapse prediction
/// s_j(t) = a_j * g(t).
struct ProbeDeviation {
  double initial_value = 0.0;   // a_j = s_j(0)
  double max_deviation = 0.0;   // max_t |s_j(t)/a_j - g(t)|
};

struct CollapseReport {
  std::vector<ProbeDeviation> probes;
  double worst = 0.0;
};

/// Check that relaxation signals with different initial values collapse onto
/// one reference shape g after normalization.  Each pair is (signal, a_j);
/// |a_j| < 0.05 throws ProbeTooSmall.
CollapseReport check_condition2(const std::vector<std::pair<Signal, double>>& signals,
                                const Signal& g);

/// sum_{mn} W_mn cos((E_m - E_n) t) for symmetric W, one grid point at a
/// time via W-contractions with the phase vector (exact, O(N^2) per point).
Signal cosine_trace_signal(const Eigen::MatrixXd& weights,
                           const Eigen::VectorXd& energies, const TimeGrid& grid);

}  // namespace memkern
