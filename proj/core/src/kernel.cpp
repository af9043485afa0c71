#include "memkern/kernel.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "memkern/errors.hpp"

namespace memkern {

namespace {

// Minimum number of grid steps the one-sided stencils need.
constexpr std::size_t kMinSteps = 6;

void require_same_step(const TimeGrid& a, const TimeGrid& b, const char* who) {
  if (std::abs(a.dt - b.dt) > 1e-12 * a.dt) {
    throw std::invalid_argument(std::string(who) + ": time steps differ");
  }
}

}  // namespace

void KernelModel::validate() const {
  if (!(delta_weight >= 0.0) || !std::isfinite(delta_weight)) {
    throw std::invalid_argument("KernelModel: delta_weight must be nonnegative");
  }
  smooth.validate();
}

double derivative_at_start(const Signal& a) {
  if (a.grid.steps < 3) {
    throw std::invalid_argument("derivative_at_start: need at least 4 samples");
  }
  const double h = a.grid.dt;
  return (-11.0 * a[0] + 18.0 * a[1] - 9.0 * a[2] + 2.0 * a[3]) / (6.0 * h);
}

double second_derivative_at_start(const Signal& a) {
  if (a.grid.steps < 4) {
    throw std::invalid_argument("second_derivative_at_start: need at least 5 samples");
  }
  const double h = a.grid.dt;
  return (35.0 * a[0] - 104.0 * a[1] + 114.0 * a[2] - 56.0 * a[3] + 11.0 * a[4]) /
         (12.0 * h * h);
}

Signal solve_volterra(const KernelModel& kernel, double a0, const TimeGrid& grid) {
  kernel.validate();
  grid.validate();
  require_same_step(grid, kernel.smooth.grid, "solve_volterra");
  if (kernel.smooth.grid.steps < grid.steps) {
    throw std::invalid_argument("solve_volterra: kernel shorter than output grid");
  }
  const double h = grid.dt;
  const double beta = kernel.delta_weight;
  const auto& k = kernel.smooth.values;

  // Implicit trapezoid on  a' = -beta a - Int_0^t K(t-u) a(u) du:
  //   a_{k+1} (1 + h beta/2 + h^2 K_0/4) = a_k + (h/2) F_k - (h/2) J_{k+1},
  // with F_k the right-hand side at t_k and J_{k+1} the part of the t_{k+1}
  // convolution that does not involve a_{k+1}.
  const double denom = 1.0 + 0.5 * h * beta + 0.25 * h * h * k[0];
  if (denom < 0.5) {
    throw StepTooLarge("solve_volterra: step too large for this kernel (denominator " +
                       std::to_string(denom) + ")");
  }

  Signal a = Signal::zeros(grid);
  a[0] = a0;
  for (std::size_t j = 0; j + 1 <= grid.steps; ++j) {
    // I_j = h (K_0 a_j / 2 + sum_{m=1}^{j-1} K_m a_{j-m} + K_j a_0 / 2); the
    // zero-length integral at j = 0 is exactly zero.
    double conv = 0.0;
    if (j >= 1) {
      conv = 0.5 * k[0] * a[j] + 0.5 * k[j] * a[0];
      for (std::size_t m = 1; m < j; ++m) {
        conv += k[m] * a[j - m];
      }
    }
    const double f_j = -beta * a[j] - h * conv;

    // J_{j+1} = h (sum_{m=1}^{j} K_m a_{j+1-m} + K_{j+1} a_0 / 2)
    double jnext = 0.5 * k[j + 1] * a[0];
    for (std::size_t m = 1; m <= j; ++m) {
      jnext += k[m] * a[j + 1 - m];
    }
    a[j + 1] = (a[j] + 0.5 * h * f_j - 0.5 * h * h * jnext) / denom;
  }
  return a;
}

KernelModel extract_kernel(const Signal& a, double tail_floor) {
  a.validate();
  const std::size_t n = a.grid.steps;
  if (n < kMinSteps) {
    throw std::invalid_argument("extract_kernel: signal too short");
  }
  const double h = a.grid.dt;
  const double a0 = a[0];
  if (std::abs(a0) < 1e-6) {
    throw SignalStartsAtZero("extract_kernel: |a(0)| = " + std::to_string(std::abs(a0)) +
                             " below 1e-6");
  }

  // Split off the instantaneous part first: a'(0+) = -delta_weight * a(0)
  // because the memory integral vanishes at t = 0.  A smooth kernel alone
  // always gives a'(0) = 0, so any initial slope is delta weight.
  const double slope0 = derivative_at_start(a);
  const double beta = std::max(0.0, -slope0 / a0);

  // With the delta removed, differentiating the relaxation equation at 0
  // pins the smooth kernel's initial value: K(0) = -(a''(0) + beta a'(0)) / a(0).
  KernelModel kernel;
  kernel.delta_weight = beta;
  kernel.smooth = Signal::zeros(a.grid);
  kernel.smooth[0] = -(second_derivative_at_start(a) + beta * slope0) / a0;

  // a'(t_k) on the interior by the fourth-order centered stencil, third-order
  // one-sided at the edges.
  std::vector<double> deriv(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    if (k >= 2 && k + 2 <= n) {
      deriv[k] = (a[k - 2] - 8.0 * a[k - 1] + 8.0 * a[k + 1] - a[k + 2]) / (12.0 * h);
    } else if (k + 3 <= n) {
      deriv[k] = (-11.0 * a[k] + 18.0 * a[k + 1] - 9.0 * a[k + 2] + 2.0 * a[k + 3]) /
                 (6.0 * h);
    } else {
      deriv[k] = (11.0 * a[k] - 18.0 * a[k - 1] + 9.0 * a[k - 2] - 2.0 * a[k - 3]) /
                 (6.0 * h);
    }
  }

  // Sequential deconvolution of the trapezoidal quadrature: at each t_k the
  // only unknown in  -a'(t_k) - beta a(t_k) = h (K_0 a_k/2 + ... + K_k a_0/2)
  // is K_k.
  const double blowup = 1e6 * (std::abs(kernel.smooth[0]) + 1.0);
  for (std::size_t k = 1; k <= n; ++k) {
    if (tail_floor > 0.0 && std::abs(a[k]) < tail_floor) {
      break;  // remaining kernel samples stay zero
    }
    double conv = 0.5 * kernel.smooth[0] * a[k];
    for (std::size_t m = 1; m < k; ++m) {
      conv += kernel.smooth[m] * a[k - m];
    }
    const double rhs = -deriv[k] - beta * a[k];
    kernel.smooth[k] = (rhs / h - conv) / (0.5 * a0);
    if (std::abs(kernel.smooth[k]) > blowup) {
      throw ExtractionUnstable("extract_kernel: kernel value " +
                               std::to_string(kernel.smooth[k]) + " at lag " +
                               std::to_string(a.grid.time(k)));
    }
  }
  return kernel;
}

KernelModel damp_kernel(const KernelModel& kernel, double gamma) {
  kernel.validate();
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("damp_kernel: gamma must be nonnegative");
  }
  KernelModel damped = kernel;
  for (std::size_t k = 0; k < damped.smooth.size(); ++k) {
    damped.smooth[k] = kernel.smooth[k] * std::exp(-gamma * kernel.smooth.grid.time(k));
  }
  return damped;
}

Signal predict_scheme(const Signal& a, double gamma) {
  const KernelModel kernel = extract_kernel(a);
  const KernelModel damped = damp_kernel(kernel, gamma);
  return solve_volterra(damped, a[0], a.grid);
}

Signal predict_integral(const Signal& a, const Signal& g, double gamma) {
  a.validate();
  g.validate();
  if (!compatible(a.grid, g.grid)) {
    throw std::invalid_argument("predict_integral: signal and g on different grids");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("predict_integral: gamma must be nonnegative");
  }
  const double h = a.grid.dt;
  if (0.5 * gamma * h * g[0] >= 1.0) {
    throw StepTooLarge("predict_integral: gamma * dt * g(0) / 2 = " +
                       std::to_string(0.5 * gamma * h * g[0]) + " >= 1");
  }

  // Forward substitution on the trapezoidal discretization of
  //   atilde(t) = a(t) e^{-gamma t}
  //             + gamma Int_0^t atilde(u) g(t-u) e^{-gamma (t-u)} du.
  // The smooth factor atilde(u) g(t-u) is interpolated linearly per cell
  // (the trapezoidal approximation); the known exponential is integrated
  // against it exactly.  With x = gamma h that turns the bare 1/2, 1, 1/2
  // weights into the exponentially fitted
  //   c_first = (x - 1 + e^{-x}) / x^2   (sample at u = t, the unknown)
  //   c_mid   = (e^x + e^{-x} - 2) / x^2
  //   c_last  = (e^x - 1 - x) / x^2      (sample at u = 0),
  // which reduce to the classic values as x -> 0.  The fitting removes the
  // O((gamma h)^2) quadrature bias the bare weights leave at strong damping,
  // where it would otherwise resonate with the slow relaxation mode.
  const double x = gamma * h;
  double c_first, c_mid, c_last;
  if (x < 1e-4) {  // closed forms lose digits to cancellation near 0
    c_first = 0.5 - x / 6.0 + x * x / 24.0;
    c_mid = 1.0 + x * x / 12.0;
    c_last = 0.5 + x / 6.0 + x * x / 24.0;
  } else {
    c_first = (x - 1.0 + std::exp(-x)) / (x * x);
    c_mid = (std::exp(x) + std::exp(-x) - 2.0) / (x * x);
    c_last = (std::exp(x) - 1.0 - x) / (x * x);
  }
  // c_first <= 1/2, so the precondition above keeps this positive.
  const double denom = 1.0 - gamma * h * c_first * g[0];

  Signal at = Signal::zeros(a.grid);
  at[0] = a[0];
  std::vector<double> damp(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    damp[k] = std::exp(-gamma * a.grid.time(k));
  }
  for (std::size_t k = 1; k < a.size(); ++k) {
    double mid = 0.0;
    for (std::size_t m = 1; m < k; ++m) {
      mid += at[m] * g[k - m] * damp[k - m];
    }
    const double conv = c_mid * mid + c_last * at[0] * g[k] * damp[k];
    at[k] = (a[k] * damp[k] + gamma * h * conv) / denom;
  }
  return at;
}

double mori_initial_value(const Eigen::MatrixXcd& hamiltonian,
                          const Eigen::MatrixXcd& observable) {
  if (hamiltonian.rows() != hamiltonian.cols() ||
      observable.rows() != observable.cols() ||
      hamiltonian.rows() != observable.rows()) {
    throw std::invalid_argument("mori_initial_value: dimension mismatch");
  }
  const double norm = (observable * observable).trace().real();
  if (!(norm > 1e-30)) {
    throw ZeroNormObservable("mori_initial_value: Tr{A^2} vanishes");
  }
  const Eigen::MatrixXcd c1 = hamiltonian * observable - observable * hamiltonian;
  const Eigen::MatrixXcd c2 = hamiltonian * c1 - c1 * hamiltonian;
  const double value = (observable * c2).trace().real() / norm;
  // Equals sum |a_mn|^2 (E_m - E_n)^2 / sum |a_mn|^2 >= 0; rounding may
  // produce a tiny negative for commuting pairs.
  return std::max(0.0, value);
}

double mori_initial_value(const Eigen::MatrixXd& hamiltonian,
                          const Eigen::MatrixXd& observable) {
  return mori_initial_value(Eigen::MatrixXcd(hamiltonian.cast<std::complex<double>>()),
                            Eigen::MatrixXcd(observable.cast<std::complex<double>>()));
}

Signal zeno_approximation(double kernel_at_zero, double gamma, double a0,
                          const TimeGrid& grid) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("zeno_approximation: gamma must be positive");
  }
  if (!(kernel_at_zero >= 0.0)) {
    throw std::invalid_argument("zeno_approximation: K(0) must be nonnegative");
  }
  const double rate = kernel_at_zero / gamma;
  return sample_function([&](double t) { return a0 * std::exp(-rate * t); }, grid);
}

LaplacePoint laplace_of_signal(const Signal& a, std::complex<double> s) {
  a.validate();
  if (!(s.real() > 0.0)) {
    throw std::invalid_argument("laplace_of_signal: Re(s) must be positive");
  }
  if (s.real() * a.grid.horizon() < 5.0) {
    std::clog << "laplace_of_signal: Re(s) * horizon = " << s.real() * a.grid.horizon()
              << " < 5, truncation error is not negligible\n";
  }
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = (k == 0 || k == a.grid.steps) ? 0.5 : 1.0;
    sum += w * a[k] * std::exp(-s * a.grid.time(k));
  }
  return LaplacePoint{s, sum * a.grid.dt};
}

double check_laplace_shift(const Signal& a, const Signal& a_tilde, double gamma,
                           const std::vector<std::complex<double>>& s_samples) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("check_laplace_shift: gamma must be nonnegative");
  }
  if (s_samples.empty()) {
    throw std::invalid_argument("check_laplace_shift: no sample points");
  }
  // kappa(s) = (a(0) - s A(s)) / A(s) is the Laplace transform of the kernel
  // implied by a signal.  Exponential damping of the kernel shifts the
  // argument, so the damped signal must satisfy kappatilde(s) = kappa(s + gamma).
  double worst = 0.0;
  for (const auto s : s_samples) {
    if (!(s.real() > 0.0) || s.real() * a_tilde.grid.horizon() < 5.0) {
      throw std::invalid_argument(
          "check_laplace_shift: sample point violates Re(s) * horizon >= 5");
    }
    const auto shifted = laplace_of_signal(a, s + gamma).value;
    const auto plain = laplace_of_signal(a_tilde, s).value;
    const auto kappa_shifted = (a[0] - (s + gamma) * shifted) / shifted;
    const auto kappa_tilde = (a_tilde[0] - s * plain) / plain;
    const double dev = std::abs(kappa_tilde - kappa_shifted) /
                       (std::abs(kappa_shifted) + 1e-12);
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace memkern
