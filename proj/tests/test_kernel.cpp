#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "memkern/closed_dynamics.hpp"
#include "memkern/errors.hpp"
#include "memkern/kernel.hpp"
#include "memkern/open_dynamics.hpp"
#include "memkern/reference.hpp"
#include "memkern/two_level.hpp"

using namespace memkern;

namespace {

Signal sample(ReferenceKind kind, const TimeGrid& grid) {
  ReferenceFunction ref;
  ref.kind = kind;
  return sample_reference(ref, grid);
}

/// Analytic memory kernel of the damped cosine: a'' + 2 mu a' + (mu^2 + w0^2) a
/// = 0 rearranges to a' = -mu a - Int w0^2 exp(-mu u) a(t - u) du, i.e. a
/// delta of weight mu plus the smooth part w0^2 exp(-mu tau).
KernelModel oscillation_kernel(const TimeGrid& grid) {
  const double mu = 0.05;
  const double w0 = 2.0 * std::numbers::pi / 10.0;
  KernelModel kernel;
  kernel.delta_weight = mu;
  kernel.smooth = Signal::zeros(grid);
  for (std::size_t k = 0; k < kernel.smooth.size(); ++k) {
    kernel.smooth[k] = w0 * w0 * std::exp(-mu * grid.time(k));
  }
  return kernel;
}

}  // namespace

TEST_CASE("start-point derivative stencils are exact on polynomials") {
  const TimeGrid grid{0.1, 8};
  Signal cubic = Signal::zeros(grid);
  for (std::size_t k = 0; k < cubic.size(); ++k) {
    const double t = grid.time(k);
    cubic[k] = 2.0 - 3.0 * t + 0.5 * t * t - 0.25 * t * t * t;
  }
  CHECK(derivative_at_start(cubic) == doctest::Approx(-3.0).epsilon(1e-12));

  Signal quartic = Signal::zeros(grid);
  for (std::size_t k = 0; k < quartic.size(); ++k) {
    const double t = grid.time(k);
    quartic[k] = 1.0 + t - 2.0 * t * t + t * t * t + 0.125 * t * t * t * t;
  }
  CHECK(second_derivative_at_start(quartic) == doctest::Approx(-4.0).epsilon(1e-10));
}

TEST_CASE("exponential extraction finds the pure delta kernel") {
  const TimeGrid grid{0.02, 750};
  const Signal g = sample(ReferenceKind::Exponential, grid);
  const KernelModel kernel = extract_kernel(g);
  CHECK(kernel.delta_weight ==
        doctest::Approx(std::numbers::ln2 / 10.0).epsilon(1e-8));
  CHECK(max_abs(kernel.smooth) <= 1e-6);
}

TEST_CASE("oscillation extraction matches the analytic kernel") {
  const TimeGrid grid{0.01, 2000};
  const Signal g = sample(ReferenceKind::Oscillation, grid);
  const KernelModel kernel = extract_kernel(g);
  const KernelModel analytic = oscillation_kernel(grid);
  CHECK(kernel.delta_weight == doctest::Approx(0.05).epsilon(1e-5));
  // The first-kind deconvolution carries a neutral sawtooth mode, so compare
  // against the analytic curve with an absolute window well above rounding
  // but far below the kernel scale w0^2 ~ 0.395.
  double worst = 0.0;
  for (std::size_t k = 0; k < kernel.smooth.size(); ++k) {
    worst = std::max(worst, std::abs(kernel.smooth[k] - analytic.smooth[k]));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("forward solve with the analytic oscillation kernel reproduces g") {
  const TimeGrid grid{0.01, 2000};
  const Signal g = sample(ReferenceKind::Oscillation, grid);
  const Signal reconstructed = solve_volterra(oscillation_kernel(grid), 1.0, grid);
  CHECK(max_abs_diff(reconstructed, g) <= 2e-4);
}

TEST_CASE("extract/solve round trip on every reference") {
  const TimeGrid grid{0.02, 750};
  const double bounds[] = {1e-6, 1e-3, 1e-10, 0.05};
  int index = 0;
  for (const auto kind : {ReferenceKind::Exponential, ReferenceKind::Oscillation,
                          ReferenceKind::Linear, ReferenceKind::Recurrence}) {
    const Signal g = sample(kind, grid);
    const Signal back = solve_volterra(extract_kernel(g), g[0], grid);
    INFO("kind ", to_string(kind));
    CHECK(max_abs_diff(back, g) <= bounds[index]);
    ++index;
  }
}

TEST_CASE("extraction across a derivative kink degrades to first order") {
  // The triangle's kink at t = 2 tau injects an h-independent error into the
  // derivative stencils; the reconstruction error then scales like h instead
  // of h^2.  This pins the known limitation.
  const TimeGrid coarse{0.05, 600};
  const TimeGrid fine{0.025, 1200};
  const Signal g_c = sample(ReferenceKind::Linear, coarse);
  const Signal g_f = sample(ReferenceKind::Linear, fine);
  const double err_c = max_abs_diff(solve_volterra(extract_kernel(g_c), 1.0, coarse), g_c);
  const double err_f = max_abs_diff(solve_volterra(extract_kernel(g_f), 1.0, fine), g_f);
  CHECK(err_c / err_f == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("damping leaves the delta weight untouched") {
  const TimeGrid grid{0.05, 100};
  KernelModel kernel;
  kernel.delta_weight = 0.3;
  kernel.smooth = Signal::zeros(grid);
  for (std::size_t k = 0; k < kernel.smooth.size(); ++k) {
    kernel.smooth[k] = 1.0 + grid.time(k);
  }
  const double gamma = 0.8;
  const KernelModel damped = damp_kernel(kernel, gamma);
  CHECK(damped.delta_weight == 0.3);
  for (std::size_t k = 0; k < damped.smooth.size(); ++k) {
    CHECK(damped.smooth[k] ==
          doctest::Approx(kernel.smooth[k] * std::exp(-gamma * grid.time(k)))
              .epsilon(1e-14));
  }
}

TEST_CASE("both prediction routes reproduce the damped two-level closed form") {
  const TimeGrid grid{1e-3, 10000};
  const Signal a = expectation_closed(two_level_spectrum(), two_level_observable(),
                                      DiagonalState::pure(2, two_level_up_index()),
                                      grid);
  const Signal c = autocorrelation(two_level_spectrum(), two_level_observable(), grid);
  for (const double gamma : {0.5, 2.0, 20.0}) {
    const Signal exact = damped_oscillator_solution(gamma, 1.0, grid);
    INFO("gamma ", gamma);
    CHECK(max_abs_diff(predict_scheme(a, gamma), exact) <= 1e-4);
    CHECK(max_abs_diff(predict_integral(a, c, gamma), exact) <= 1e-4);
  }
}

TEST_CASE("gamma = 0 predictions return the input dynamics") {
  const TimeGrid grid{0.02, 500};
  const Signal g = sample(ReferenceKind::Oscillation, grid);
  CHECK(max_abs_diff(predict_scheme(g, 0.0), g) <= 1e-4);
  CHECK(max_abs_diff(predict_integral(g, g, 0.0), g) <= 1e-12);
}

TEST_CASE("mori formula gives K(0) = 4 for the two-level pair") {
  Eigen::MatrixXd h(2, 2);
  h << -1.0, 0.0, 0.0, 1.0;
  const Eigen::MatrixXd a = two_level_observable().matrix;
  CHECK(mori_initial_value(h, a) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(mori_initial_value(h, Eigen::MatrixXd::Zero(2, 2)),
                  ZeroNormObservable);
}

TEST_CASE("zeno approximation freezes with rate K(0)/gamma") {
  const TimeGrid grid{0.1, 100};
  const Signal z = zeno_approximation(4.0, 20.0, 0.9, grid);
  CHECK(z[0] == doctest::Approx(0.9));
  CHECK(z[50] == doctest::Approx(0.9 * std::exp(-0.2 * grid.time(50))).epsilon(1e-12));
  CHECK_THROWS_AS(zeno_approximation(4.0, 0.0, 1.0, grid), std::invalid_argument);
}

TEST_CASE("laplace transform of the exponential reference") {
  const TimeGrid grid{0.005, 24000};  // horizon 120
  const Signal g = sample(ReferenceKind::Exponential, grid);
  const double lambda = std::numbers::ln2 / 10.0;
  for (const double s : {0.5, 1.0, 2.0}) {
    const auto value = laplace_of_signal(g, s).value;
    CHECK(value.real() == doctest::Approx(1.0 / (s + lambda)).epsilon(1e-5));
    CHECK(std::abs(value.imag()) <= 1e-12);
  }
  CHECK_THROWS_AS(laplace_of_signal(g, std::complex<double>(-0.1, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("laplace shift check accepts the two-level kernel route") {
  const TimeGrid grid{1e-3, 10000};
  const Signal a = expectation_closed(two_level_spectrum(), two_level_observable(),
                                      DiagonalState::pure(2, two_level_up_index()),
                                      grid);
  const double gamma = 1.0;
  const Signal at = predict_scheme(a, gamma);
  const double worst = check_laplace_shift(a, at, gamma, {1.5, 2.0, 3.0});
  CHECK(worst <= 0.02);
  // Samples whose transform is dominated by truncation are refused.
  CHECK_THROWS_AS(check_laplace_shift(a, at, gamma, {std::complex<double>(0.1, 0.0)}),
                  std::invalid_argument);
}

TEST_CASE("extraction error types") {
  const TimeGrid grid{0.1, 50};
  Signal starts_at_zero = Signal::zeros(grid);
  CHECK_THROWS_AS(extract_kernel(starts_at_zero), SignalStartsAtZero);

  // A sharply growing signal pushes a deconvolution root inside the unit
  // disk; the extracted kernel then explodes geometrically.
  Signal growing = Signal::zeros(grid);
  for (std::size_t k = 0; k < growing.size(); ++k) {
    growing[k] = std::exp(16.0 * grid.time(k));
  }
  CHECK_THROWS_AS(extract_kernel(growing), ExtractionUnstable);

  Signal too_short{TimeGrid{0.1, 3}, {1.0, 0.9, 0.8, 0.7}};
  CHECK_THROWS_AS(extract_kernel(too_short), std::invalid_argument);
}

TEST_CASE("volterra solver guards its step size") {
  const TimeGrid grid{0.1, 50};
  KernelModel kernel;
  kernel.delta_weight = 0.0;
  kernel.smooth = Signal::zeros(grid);
  kernel.smooth[0] = -500.0;  // denom = 1 + h^2 K0 / 4 = -0.25
  CHECK_THROWS_AS(solve_volterra(kernel, 1.0, grid), StepTooLarge);

  const Signal g = sample(ReferenceKind::Exponential, grid);
  CHECK_THROWS_AS(predict_integral(g, g, 25.0), StepTooLarge);
}
