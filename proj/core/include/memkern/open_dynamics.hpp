#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "memkern/closed_dynamics.hpp"
#include "memkern/spectral_model.hpp"
#include "memkern/time_grid.hpp"

namespace memkern {

/// Dense density matrix in the observable eigenbasis.
struct DensityMatrix {
  Eigen::MatrixXcd entries;

  std::size_t dimension() const { return static_cast<std::size_t>(entries.rows()); }
};

double trace_error(const DensityMatrix& rho);         // |Tr rho - 1|
double hermiticity_defect(const DensityMatrix& rho);  // max |rho - rho^dag|
double min_eigenvalue(const DensityMatrix& rho);

enum class Stepper {
  RungeKutta4,  // classic RK4 on the master equation
  DiscreteMap,  // unitary step followed by a partial projective collapse
};

struct LindbladConfig {
  double gamma = 0.0;  // dephasing rate, >= 0
  TimeGrid grid{};     // integration grid; one stepper step per grid step
  Stepper stepper = Stepper::RungeKutta4;

  void validate() const;  // throws std::invalid_argument
};

/// Right-hand side of the dephasing master equation
///   d rho / dt = -i [H, rho] + gamma (diag(rho) - rho).
///
/// The jump operators of pure dephasing in the measured eigenbasis are the
/// projectors P_j = |j><j|.  Then sum_j P_j rho P_j = diag(rho) and
/// sum_j P_j^dag P_j = identity, so the standard dissipator
/// sum_j (P_j rho P_j - {P_j^dag P_j, rho}/2) collapses to diag(rho) - rho.
/// For Hermitian rho the commutator is [H, rho] = M - M^dag with M = H rho,
/// which costs a single dense product.
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho,
                              const Eigen::MatrixXcd& hamiltonian, double gamma);

/// State invariants observed during a propagation (sampled every 100 steps
/// and at the final step).
struct PropagationStats {
  double max_trace_error = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 1.0;

  void merge(const PropagationStats& other);
};

/// Step rho0 across the grid, invoking observer(k, rho) at every grid index
/// (including k = 0).  Throws PositivityLost when a sampled state dips below
/// eigenvalue -1e-6.
void propagate_lindblad_observe(
    const DensityMatrix& rho0, const Eigen::MatrixXcd& hamiltonian,
    const LindbladConfig& config,
    const std::function<void(std::size_t, const DensityMatrix&)>& observer,
    PropagationStats* stats = nullptr);

/// Convenience wrapper returning all snapshots; memory O(steps * N^2), so
/// meant for small systems.
std::vector<DensityMatrix> propagate_lindblad(const DensityMatrix& rho0,
                                              const Eigen::MatrixXcd& hamiltonian,
                                              const LindbladConfig& config,
                                              PropagationStats* stats = nullptr);

/// One step of the dephasing map: evolve unitarily, then collapse a fraction
/// gamma*T of the ensemble onto the measured basis:
///   rho' = (1 - gamma T) U rho U^dag + gamma T diag(U rho U^dag).
/// Requires gamma*T < 1.
DensityMatrix step_discrete_map(const DensityMatrix& rho, const Eigen::MatrixXcd& u,
                                double gamma, double step);

/// H expressed in the observable eigenbasis: B^T diag(E) B.
Eigen::MatrixXcd hamiltonian_in_observable_basis(const Spectrum& spectrum,
                                                 const EthObservable& observable);

/// exp(-i H T) in the observable eigenbasis, computed spectrally (exact).
Eigen::MatrixXcd closed_step_propagator(const Spectrum& spectrum,
                                        const EthObservable& observable, double step);

/// Brute-force <A>(t) under dephasing: full density-matrix integration in
/// the observable eigenbasis, reading off sum_j a_j rho_jj at every grid
/// point.  The reference answer everything else is compared against.
/// Dimension is capped at 1024 (DimensionTooLarge beyond that).
Signal oracle_decohered(const Spectrum& spectrum, const EthObservable& observable,
                        const DiagonalState& state, const LindbladConfig& config,
                        PropagationStats* stats = nullptr);

/// Substeps per grid interval that bring the RK4 integration into its
/// stability region, dt * (spectral radius + gamma) <= 0.1; integrate on the
/// refined grid and `downsample` back to report on the requested one.
std::size_t oracle_substeps(const TimeGrid& grid, double radius, double gamma);

}  // namespace memkern
