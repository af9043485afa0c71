#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "memkern/reference.hpp"

namespace memkern {

/// Eigenvalues of the Hamiltonian, sorted ascending.  The model spectrum is
/// dense and featureless: levels drawn i.i.d. uniformly on
/// [-half_width, +half_width].
struct Spectrum {
  Eigen::VectorXd energies;
  double half_width = 30.0;

  std::size_t dimension() const { return static_cast<std::size_t>(energies.size()); }
  void validate() const;  // sorted, inside [-half_width, half_width]
};

struct EthEnsembleConfig {
  std::size_t dimension = 2000;
  double half_width = 30.0;
  ReferenceFunction reference{};
  std::uint64_t seed = 1;
  /// Transition elements are zeroed for |omega| > spectral_cutoff * half_width.
  double spectral_cutoff = 1.5;

  void validate() const;  // throws std::invalid_argument
};

/// Random observable in the energy eigenbasis together with its own
/// eigendecomposition, normalized so that max_j |eigenvalue_j| = 1.
struct EthObservable {
  Eigen::MatrixXd matrix;       // symmetric, energy eigenbasis
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenbasis;   // column j = eigenvector of eigenvalues[j]
  double scale = 1.0;           // factor applied to reach the normalization

  std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Density of level pairs at gap omega = E_j - E_l for the uniform spectrum:
/// a triangle nu(omega) = (2 half_width - |omega|) / (2 half_width)^2 on
/// |omega| < 2 half_width, normalized to unit integral.
double pair_gap_density(double omega, double half_width);

/// Draw the spectrum (deterministic in config.seed).
Spectrum sample_spectrum(const EthEnsembleConfig& config);

/// Standard deviation assigned to the transition element at gap omega:
/// f(omega) = sqrt(ghat(omega) / nu(omega)), zeroed beyond the cutoff and
/// where the pair density falls below 1e-6 of its peak.
double spectral_filter(const ReferenceFunction& ref, const Spectrum& spectrum,
                       double omega, double spectral_cutoff);

/// Fill a_jl = f(E_j - E_l) * R_jl with R symmetric Gaussian, diagonalize,
/// and normalize.  Deterministic in config.seed.
EthObservable build_observable(const Spectrum& spectrum,
                               const EthEnsembleConfig& config);

/// For each target expectation value, the index of the observable eigenvalue
/// closest to it (ties resolved toward the smaller index).
std::vector<std::size_t> select_initial_levels(const EthObservable& observable,
                                               const std::vector<double>& targets);

/// Eigendecomposition of a dense symmetric matrix (ascending eigenvalues,
/// orthonormal columns).  Backed by LAPACK dsyevd when built with it.
void eigensolve_symmetric(const Eigen::MatrixXd& a, Eigen::VectorXd& eigenvalues,
                          Eigen::MatrixXd& eigenvectors);

}  // namespace memkern
