#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "memkern/time_grid.hpp"

namespace memkern {

/// Memory kernel of the integro-differential relaxation equation
///   da/dt = - Int_0^t K(t - t') a(t') dt',
/// split as K(tau) = delta_weight * delta(tau) + smooth(tau).  The delta part
/// captures kernels proportional to the signal itself (a Markovian drift);
/// the sampled part carries everything with nonzero memory.
struct KernelModel {
  double delta_weight = 0.0;
  Signal smooth;

  void validate() const;  // delta_weight >= 0, smooth finite
};

/// One Laplace-domain sample of a signal, value = Int_0^T a(t) e^{-s t} dt.
struct LaplacePoint {
  std::complex<double> s;
  std::complex<double> value;
};

/// Integrate da/dt = -delta_weight * a - Int_0^t smooth(t-t') a(t') dt' with
/// the implicit trapezoidal rule (second order).  The kernel must be sampled
/// on the same dt and reach at least as far as the output grid.
Signal solve_volterra(const KernelModel& kernel, double a0, const TimeGrid& grid);

/// Recover the kernel from a signal by inverting the same trapezoidal
/// discretization step by step.  delta_weight is estimated from the initial
/// slope (max(0, -a'(0)/a(0)), one-sided third-order stencil), the smooth
/// part starts from -(a''(0) + delta_weight a'(0))/a(0) and follows by
/// sequential deconvolution.  Requires |a(0)| >= 1e-6 (SignalStartsAtZero
/// below that); growth of the kernel by six orders of magnitude over its
/// initial scale throws ExtractionUnstable.  If tail_floor > 0, extraction
/// stops once |a(t)| < tail_floor and the remaining kernel samples are zero.
KernelModel extract_kernel(const Signal& a, double tail_floor = 0.0);

/// The exponential damping K(tau) -> K(tau) e^{-gamma tau}.  The delta part
/// is untouched: its support is tau = 0 where the damping factor is 1.
KernelModel damp_kernel(const KernelModel& kernel, double gamma);

/// Dephasing prediction, kernel route: extract the kernel of `a`, damp it
/// with gamma, and re-solve with the same initial value.
Signal predict_scheme(const Signal& a, double gamma);

/// Dephasing prediction, integral route (no kernel extraction):
///   atilde(t) = a(t) e^{-gamma t}
///             + gamma Int_0^t atilde(t') g(t - t') e^{-gamma (t - t')} dt',
/// solved by forward substitution on the trapezoidal discretization; the
/// known exponential factor is integrated exactly against the per-cell
/// linear interpolant (product integration), which keeps the quadrature
/// second order in dt uniformly in gamma.  Exact for signals collapsing
/// onto a(t) = a(0) g(t).  Throws StepTooLarge when gamma * dt * g(0) / 2 >= 1.
Signal predict_integral(const Signal& a, const Signal& g, double gamma);

/// Kernel value at tau = 0 from operators alone:
///   K(0) = Tr{A [H, [H, A]]} / Tr{A^2}
/// (= the negative second derivative of the normalized autocorrelation at
/// t = 0).  Throws ZeroNormObservable when Tr{A^2} vanishes.
double mori_initial_value(const Eigen::MatrixXcd& hamiltonian,
                          const Eigen::MatrixXcd& observable);
double mori_initial_value(const Eigen::MatrixXd& hamiltonian,
                          const Eigen::MatrixXd& observable);

/// Strong-damping limit: once gamma^2 >> K(0), the damped kernel acts like a
/// delta of weight K(0)/gamma and the signal decays as
///   atilde(t) = a0 exp(-K(0) t / gamma).
/// The decay slows down as gamma grows -- the overdamped freeze-out.
Signal zeno_approximation(double kernel_at_zero, double gamma, double a0,
                          const TimeGrid& grid);

/// Truncated Laplace transform of a sampled signal (trapezoidal rule).  The
/// truncation error is only negligible when Re(s) * horizon >= 5; below that
/// a warning is printed to stderr.
LaplacePoint laplace_of_signal(const Signal& a, std::complex<double> s);

/// Check the Laplace-domain fingerprint of exponential kernel damping.  With
/// kappa(s) = (a(0) - s A(s)) / A(s) the kernel transform implied by a
/// signal, damping shifts the argument: kappatilde(s) = kappa(s + gamma).
/// Returns the worst relative deviation |kappatilde(s) - kappa(s+gamma)| /
/// (|kappa(s+gamma)| + 1e-12) over the sample points.
double check_laplace_shift(const Signal& a, const Signal& a_tilde, double gamma,
                           const std::vector<std::complex<double>>& s_samples);

/// One-sided derivative estimates at t = 0 used by the extractor (exposed
/// for testing): third-order four-point a'(0), second-order five-point a''(0).
double derivative_at_start(const Signal& a);
double second_derivative_at_start(const Signal& a);

}  // namespace memkern
