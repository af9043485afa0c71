#include "memkern/closed_dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "memkern/errors.hpp"

namespace memkern {

DiagonalState DiagonalState::pure(std::size_t dimension, std::size_t level) {
  if (level >= dimension) {
    throw std::invalid_argument("DiagonalState::pure: level out of range");
  }
  DiagonalState state;
  state.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension));
  state.weights[static_cast<Eigen::Index>(level)] = 1.0;
  return state;
}

void DiagonalState::validate() const {
  if (weights.size() == 0) {
    throw std::invalid_argument("DiagonalState: empty");
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) {
      throw std::invalid_argument("DiagonalState: weights must be nonnegative");
    }
    sum += weights[j];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("DiagonalState: weights must sum to one");
  }
}

Signal cosine_trace_signal(const Eigen::MatrixXd& weights,
                           const Eigen::VectorXd& energies, const TimeGrid& grid) {
  if (weights.rows() != weights.cols() || weights.rows() != energies.size()) {
    throw std::invalid_argument("cosine_trace_signal: dimension mismatch");
  }
  const Eigen::Index n = energies.size();
  Signal out = Signal::zeros(grid);
  // sum_{mn} W_mn cos((E_m - E_n) t) = Re(u^dag W u) with u_m = e^{i E_m t}
  //                                  = c.(Wc) + s.(Ws),  c = cos(Et), s = sin(Et);
  // two symmetric matrix-vector passes per time point, no accumulation of
  // phase error across points.
  Eigen::VectorXd c(n), s(n), wc(n), ws(n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = grid.time(k);
    for (Eigen::Index m = 0; m < n; ++m) {
      c[m] = std::cos(energies[m] * t);
      s[m] = std::sin(energies[m] * t);
    }
    wc.noalias() = weights * c;
    ws.noalias() = weights * s;
    out[k] = c.dot(wc) + s.dot(ws);
  }
  return out;
}

std::vector<Signal> expectation_closed_pure(const Spectrum& spectrum,
                                            const EthObservable& observable,
                                            const std::vector<std::size_t>& levels,
                                            const TimeGrid& grid) {
  spectrum.validate();
  const auto n = static_cast<Eigen::Index>(spectrum.dimension());
  if (observable.eigenvalues.size() != n || observable.eigenbasis.rows() != n) {
    throw std::invalid_argument("expectation_closed_pure: dimension mismatch");
  }
  const auto m = static_cast<Eigen::Index>(levels.size());
  for (std::size_t level : levels) {
    if (level >= spectrum.dimension()) {
      throw std::invalid_argument("expectation_closed_pure: level out of range");
    }
  }

  // |psi_j(t)> = e^{-iHt} |j> decomposed back into the observable basis:
  // coords = B^T (e^{-iEt} o psi_j), and <A>(t) = sum_k a_k |coords_k|^2.
  // Real and imaginary phase columns for all requested states are stacked so
  // that each time point costs a single pass over the eigenbasis.
  std::vector<Signal> out(levels.size(), Signal::zeros(grid));
  Eigen::MatrixXd phases(n, 2 * m), coords(n, 2 * m);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.time(k);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto psi = observable.eigenbasis.col(static_cast<Eigen::Index>(levels[j]));
      for (Eigen::Index i = 0; i < n; ++i) {
        const double phase = spectrum.energies[i] * t;
        phases(i, j) = std::cos(phase) * psi[i];
        phases(i, j + m) = std::sin(phase) * psi[i];
      }
    }
    coords.noalias() = observable.eigenbasis.transpose() * phases;
    for (Eigen::Index j = 0; j < m; ++j) {
      double value = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        value += observable.eigenvalues[i] *
                 (coords(i, j) * coords(i, j) + coords(i, j + m) * coords(i, j + m));
      }
      out[static_cast<std::size_t>(j)][k] = value;
    }
  }
  return out;
}

Signal expectation_closed(const Spectrum& spectrum, const EthObservable& observable,
                          const DiagonalState& state, const TimeGrid& grid) {
  state.validate();
  spectrum.validate();
  const auto n = static_cast<Eigen::Index>(spectrum.dimension());
  if (state.weights.size() != n || observable.eigenvalues.size() != n) {
    throw std::invalid_argument("expectation_closed: dimension mismatch");
  }

  std::vector<std::size_t> occupied;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (state.weights[j] != 0.0) {
      occupied.push_back(static_cast<std::size_t>(j));
    }
  }

  if (occupied.size() <= 8) {
    // Few occupied levels: evaluate per level and combine.
    const auto parts = expectation_closed_pure(spectrum, observable, occupied, grid);
    Signal out = Signal::zeros(grid);
    for (std::size_t j = 0; j < occupied.size(); ++j) {
      const double w = state.weights[static_cast<Eigen::Index>(occupied[j])];
      for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += w * parts[j][k];
      }
    }
    return out;
  }

  // Dense mixture: <A>(t) = sum_{mn} W_mn cos((E_m - E_n) t) with
  // W = A o rho(0) in the energy basis (elementwise product; the phases of
  // the off-diagonal pairs combine into cosines because both factors are
  // real symmetric).
  Eigen::MatrixXd rho_e = observable.eigenbasis * state.weights.asDiagonal() *
                          observable.eigenbasis.transpose();
  Eigen::MatrixXd w = observable.matrix.cwiseProduct(rho_e);
  return cosine_trace_signal(w, spectrum.energies, grid);
}

Signal autocorrelation(const Spectrum& spectrum, const EthObservable& observable,
                       const TimeGrid& grid) {
  spectrum.validate();
  const auto n = static_cast<Eigen::Index>(spectrum.dimension());
  if (observable.matrix.rows() != n) {
    throw std::invalid_argument("autocorrelation: dimension mismatch");
  }
  // C(t) = sum |a_mn|^2 cos(omega_mn t) / Tr{A^2}; dividing by the t = 0
  // value of the same evaluation makes C(0) = 1 exactly.
  Eigen::MatrixXd w = observable.matrix.cwiseProduct(observable.matrix);
  const double norm = w.sum();
  if (!(norm > 1e-14)) {
    throw ZeroNormObservable("autocorrelation: Tr{A^2} vanishes");
  }
  Signal c = cosine_trace_signal(w, spectrum.energies, grid);
  const double c0 = c[0];
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] /= c0;
  }
  return c;
}

CollapseReport check_condition2(const std::vector<std::pair<Signal, double>>& signals,
                                const Signal& g) {
  CollapseReport report;
  for (const auto& [signal, a0] : signals) {
    if (std::abs(a0) < 0.05) {
      throw ProbeTooSmall("initial expectation value " + std::to_string(a0) +
                          " is too small to normalize by");
    }
    if (!compatible(signal.grid, g.grid)) {
      throw std::invalid_argument("check_condition2: signal grid differs from g grid");
    }
    ProbeDeviation dev;
    dev.initial_value = a0;
    for (std::size_t k = 0; k < signal.size(); ++k) {
      dev.max_deviation = std::max(dev.max_deviation,
                                   std::abs(signal[k] / a0 - g[k]));
    }
    report.worst = std::max(report.worst, dev.max_deviation);
    report.probes.push_back(dev);
  }
  return report;
}

}  // namespace memkern
