#include "memkern/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "memkern/errors.hpp"
#include "rng.hpp"

#ifdef MEMKERN_USE_LAPACK
#include <lapacke.h>
#endif

namespace memkern {

void Spectrum::validate() const {
  if (energies.size() < 2) {
    throw std::invalid_argument("spectrum: need at least two levels");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("spectrum: half_width must be positive");
  }
  for (Eigen::Index j = 0; j < energies.size(); ++j) {
    if (std::abs(energies[j]) > half_width * (1.0 + 1e-12)) {
      throw std::invalid_argument("spectrum: level outside [-half_width, half_width]");
    }
    if (j > 0 && energies[j] < energies[j - 1]) {
      throw std::invalid_argument("spectrum: levels not sorted");
    }
  }
}

void EthEnsembleConfig::validate() const {
  if (dimension < 2) {
    throw std::invalid_argument("ensemble: dimension must be at least 2");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("ensemble: half_width must be positive");
  }
  if (!(spectral_cutoff > 0.0) || spectral_cutoff > 2.0) {
    throw std::invalid_argument("ensemble: spectral_cutoff must lie in (0, 2]");
  }
  reference.validate();
}

double pair_gap_density(double omega, double half_width) {
  // Difference of two independent uniforms on [-h, h]: triangular density
  // on [-2h, 2h] peaking at 1/(2h).
  const double span = 2.0 * half_width;
  const double a = std::abs(omega);
  if (a >= span) {
    return 0.0;
  }
  return (span - a) / (span * span);
}

Spectrum sample_spectrum(const EthEnsembleConfig& config) {
  config.validate();
  detail::Rng rng(config.seed);
  Eigen::VectorXd e(static_cast<Eigen::Index>(config.dimension));
  for (Eigen::Index j = 0; j < e.size(); ++j) {
    e[j] = rng.uniform(-config.half_width, config.half_width);
  }
  std::sort(e.begin(), e.end());
  Spectrum spectrum{std::move(e), config.half_width};
  spectrum.validate();
  return spectrum;
}

double spectral_filter(const ReferenceFunction& ref, const Spectrum& spectrum,
                       double omega, double spectral_cutoff) {
  const double h = spectrum.half_width;
  if (std::abs(omega) > spectral_cutoff * h) {
    return 0.0;
  }
  const double nu = pair_gap_density(omega, h);
  const double nu_peak = 1.0 / (2.0 * h);
  // The triangle vanishes at the edge of the gap range, which would blow the
  // filter up; gaps that rare never matter, so cut the filter there too.
  if (nu < 1e-6 * nu_peak) {
    return 0.0;
  }
  return std::sqrt(ref.spectral_density(omega) / nu);
}

EthObservable build_observable(const Spectrum& spectrum, const EthEnsembleConfig& config) {
  config.validate();
  spectrum.validate();
  const auto n = static_cast<Eigen::Index>(spectrum.dimension());
  // The matrix stream is decoupled from the spectrum stream (which consumed
  // `dimension` draws from the same seed) so that either can be regenerated
  // independently.
  detail::Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  EthObservable obs;
  obs.matrix.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = j; l < n; ++l) {
      const double omega = spectrum.energies[j] - spectrum.energies[l];
      const double f = spectral_filter(config.reference, spectrum, omega,
                                       config.spectral_cutoff);
      const double a = f * rng.normal();
      obs.matrix(j, l) = a;
      obs.matrix(l, j) = a;
    }
  }

  eigensolve_symmetric(obs.matrix, obs.eigenvalues, obs.eigenbasis);

  for (Eigen::Index j = 1; j < n; ++j) {
    if (obs.eigenvalues[j] - obs.eigenvalues[j - 1] < 1e-12) {
      throw DegenerateObservable("observable eigenvalues " + std::to_string(j - 1) +
                                 " and " + std::to_string(j) + " coincide");
    }
  }

  // Normalize to max |a_j| = 1; with eigenvalues sorted the extremes sit at
  // the ends.
  const double a_max = std::max(std::abs(obs.eigenvalues[0]),
                                std::abs(obs.eigenvalues[n - 1]));
  if (!(a_max > 0.0)) {
    throw DegenerateObservable("observable vanished: all eigenvalues zero");
  }
  obs.scale = 1.0 / a_max;
  obs.matrix *= obs.scale;
  obs.eigenvalues *= obs.scale;
  return obs;
}

std::vector<std::size_t> select_initial_levels(const EthObservable& observable,
                                               const std::vector<double>& targets) {
  const auto n = observable.eigenvalues.size();
  if (n == 0) {
    throw std::invalid_argument("select_initial_levels: empty observable");
  }
  std::vector<std::size_t> indices;
  indices.reserve(targets.size());
  for (double target : targets) {
    Eigen::Index best = 0;
    double best_dist = std::abs(observable.eigenvalues[0] - target);
    for (Eigen::Index j = 1; j < n; ++j) {
      const double d = std::abs(observable.eigenvalues[j] - target);
      if (d < best_dist) {
        best = j;
        best_dist = d;
      }
    }
    indices.push_back(static_cast<std::size_t>(best));
  }
  return indices;
}

void eigensolve_symmetric(const Eigen::MatrixXd& a, Eigen::VectorXd& eigenvalues,
                          Eigen::MatrixXd& eigenvectors) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("eigensolve_symmetric: matrix not square");
  }
#ifdef MEMKERN_USE_LAPACK
  eigenvectors = a;  // dsyevd overwrites in place
  eigenvalues.resize(a.rows());
  const auto n = static_cast<lapack_int>(a.rows());
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, eigenvectors.data(), n,
                     eigenvalues.data());
  if (info != 0) {
    throw std::runtime_error("dsyevd failed with info = " + std::to_string(info));
  }
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Eigen eigensolver failed");
  }
  eigenvalues = solver.eigenvalues();
  eigenvectors = solver.eigenvectors();
#endif
}

}  // namespace memkern
