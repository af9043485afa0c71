#include "memkern/open_dynamics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "memkern/errors.hpp"

namespace memkern {

namespace {

constexpr std::size_t kCheckCadence = 100;  // invariant checks every 100 steps
constexpr double kPositivityFloor = -1e-6;

using Cplx = std::complex<double>;

void check_invariants(const DensityMatrix& rho, std::size_t step,
                      PropagationStats& stats) {
  stats.max_trace_error = std::max(stats.max_trace_error, trace_error(rho));
  stats.max_hermiticity_defect =
      std::max(stats.max_hermiticity_defect, hermiticity_defect(rho));
  const double lo = min_eigenvalue(rho);
  stats.min_eigenvalue = std::min(stats.min_eigenvalue, lo);
  if (lo < kPositivityFloor) {
    throw PositivityLost("state eigenvalue " + std::to_string(lo) + " at step " +
                         std::to_string(step));
  }
}

}  // namespace

double trace_error(const DensityMatrix& rho) {
  return std::abs(rho.entries.trace() - Cplx(1.0, 0.0));
}

double hermiticity_defect(const DensityMatrix& rho) {
  return (rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void PropagationStats::merge(const PropagationStats& other) {
  max_trace_error = std::max(max_trace_error, other.max_trace_error);
  max_hermiticity_defect = std::max(max_hermiticity_defect, other.max_hermiticity_defect);
  min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
}

void LindbladConfig::validate() const {
  grid.validate();
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("LindbladConfig: gamma must be nonnegative");
  }
  if (stepper == Stepper::DiscreteMap && gamma * grid.dt >= 1.0) {
    throw std::invalid_argument("LindbladConfig: discrete map needs gamma * dt < 1");
  }
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho,
                              const Eigen::MatrixXcd& hamiltonian, double gamma) {
  if (rho.rows() != rho.cols() || hamiltonian.rows() != rho.rows() ||
      hamiltonian.rows() != hamiltonian.cols()) {
    throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  }
  // M = H rho; for Hermitian rho the commutator is [H, rho] = M - M^dag, so
  // one dense product per evaluation.
  Eigen::MatrixXcd m = hamiltonian * rho;
  Eigen::MatrixXcd out = Cplx(0.0, -1.0) * (m - m.adjoint());
  out -= gamma * rho;
  out.diagonal() += gamma * rho.diagonal();
  return out;
}

void propagate_lindblad_observe(
    const DensityMatrix& rho0, const Eigen::MatrixXcd& hamiltonian,
    const LindbladConfig& config,
    const std::function<void(std::size_t, const DensityMatrix&)>& observer,
    PropagationStats* stats) {
  config.validate();
  const Eigen::Index n = rho0.entries.rows();
  if (rho0.entries.cols() != n || hamiltonian.rows() != n || hamiltonian.cols() != n) {
    throw std::invalid_argument("propagate_lindblad: dimension mismatch");
  }

  PropagationStats local;
  DensityMatrix rho = rho0;
  const double dt = config.grid.dt;
  const double gamma = config.gamma;

  Eigen::MatrixXcd u;  // discrete map only
  if (config.stepper == Stepper::DiscreteMap) {
    // Dense matrix exponential for one step; reused every step.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("propagate_lindblad: eigensolve of H failed");
    }
    const auto& basis = solver.eigenvectors();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      phases[j] = std::polar(1.0, -solver.eigenvalues()[j] * dt);
    }
    u = basis * phases.asDiagonal() * basis.adjoint();
  }

  check_invariants(rho, 0, local);
  observer(0, rho);

  Eigen::MatrixXcd k1, k2, k3, k4, stage;
  for (std::size_t step = 1; step <= config.grid.steps; ++step) {
    if (config.stepper == Stepper::RungeKutta4) {
      k1 = lindblad_rhs(rho.entries, hamiltonian, gamma);
      stage = rho.entries + (0.5 * dt) * k1;
      k2 = lindblad_rhs(stage, hamiltonian, gamma);
      stage = rho.entries + (0.5 * dt) * k2;
      k3 = lindblad_rhs(stage, hamiltonian, gamma);
      stage = rho.entries + dt * k3;
      k4 = lindblad_rhs(stage, hamiltonian, gamma);
      rho.entries += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      rho = step_discrete_map(rho, u, gamma, dt);
    }
    if (step % kCheckCadence == 0 || step == config.grid.steps) {
      check_invariants(rho, step, local);
    }
    observer(step, rho);
  }

  if (stats != nullptr) {
    stats->merge(local);
  }
}

std::vector<DensityMatrix> propagate_lindblad(const DensityMatrix& rho0,
                                              const Eigen::MatrixXcd& hamiltonian,
                                              const LindbladConfig& config,
                                              PropagationStats* stats) {
  std::vector<DensityMatrix> snapshots;
  snapshots.reserve(config.grid.size());
  propagate_lindblad_observe(
      rho0, hamiltonian, config,
      [&](std::size_t, const DensityMatrix& rho) { snapshots.push_back(rho); }, stats);
  return snapshots;
}

DensityMatrix step_discrete_map(const DensityMatrix& rho, const Eigen::MatrixXcd& u,
                                double gamma, double step) {
  const double p = gamma * step;
  if (!(p >= 0.0) || p >= 1.0) {
    throw std::invalid_argument("step_discrete_map: need 0 <= gamma * step < 1");
  }
  // Unitary stretch, then a fraction p of the ensemble collapses onto the
  // measured basis (keeps only the diagonal).
  Eigen::MatrixXcd evolved = u * rho.entries * u.adjoint();
  DensityMatrix out;
  out.entries = (1.0 - p) * evolved;
  out.entries.diagonal() += p * evolved.diagonal();
  return out;
}

Eigen::MatrixXcd hamiltonian_in_observable_basis(const Spectrum& spectrum,
                                                 const EthObservable& observable) {
  const auto n = static_cast<Eigen::Index>(spectrum.dimension());
  if (observable.eigenbasis.rows() != n) {
    throw std::invalid_argument("hamiltonian_in_observable_basis: dimension mismatch");
  }
  Eigen::MatrixXd h = observable.eigenbasis.transpose() *
                      spectrum.energies.asDiagonal() * observable.eigenbasis;
  return h.cast<Cplx>();
}

Eigen::MatrixXcd closed_step_propagator(const Spectrum& spectrum,
                                        const EthObservable& observable, double step) {
  const auto n = static_cast<Eigen::Index>(spectrum.dimension());
  if (observable.eigenbasis.rows() != n) {
    throw std::invalid_argument("closed_step_propagator: dimension mismatch");
  }
  Eigen::VectorXcd phases(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    phases[j] = std::polar(1.0, -spectrum.energies[j] * step);
  }
  // U = B^T diag(e^{-iET}) B, exact to rounding (H is diagonal in the energy
  // basis, B maps to the observable basis).
  return observable.eigenbasis.transpose().cast<Cplx>() * phases.asDiagonal() *
         observable.eigenbasis.cast<Cplx>();
}

Signal oracle_decohered(const Spectrum& spectrum, const EthObservable& observable,
                        const DiagonalState& state, const LindbladConfig& config,
                        PropagationStats* stats) {
  spectrum.validate();
  state.validate();
  config.validate();
  const std::size_t n = spectrum.dimension();
  if (n > 1024) {
    throw DimensionTooLarge("oracle_decohered: dimension " + std::to_string(n) +
                            " exceeds the dense-state cap of 1024");
  }
  if (state.dimension() != n || observable.dimension() != n) {
    throw std::invalid_argument("oracle_decohered: dimension mismatch");
  }
  if (config.stepper == Stepper::RungeKutta4) {
    const double radius = std::max(std::abs(spectrum.energies[0]),
                                   std::abs(spectrum.energies[spectrum.energies.size() - 1]));
    if (config.grid.dt * (radius + config.gamma) > 0.1 + 1e-12) {
      throw std::invalid_argument(
          "oracle_decohered: dt * (spectral radius + gamma) must stay below 0.1");
    }
  }

  DensityMatrix rho0;
  rho0.entries = state.weights.cast<Cplx>().asDiagonal();
  const Eigen::MatrixXcd h = hamiltonian_in_observable_basis(spectrum, observable);

  Signal out = Signal::zeros(config.grid);
  propagate_lindblad_observe(
      rho0, h, config,
      [&](std::size_t k, const DensityMatrix& rho) {
        double value = 0.0;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
          value += observable.eigenvalues[j] * rho.entries(j, j).real();
        }
        out[k] = value;
      },
      stats);
  return out;
}

std::size_t oracle_substeps(const TimeGrid& grid, double radius, double gamma) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(grid.dt * (radius + gamma) / 0.1)));
}

}  // namespace memkern
