#include <doctest.h>

#include <cmath>
#include <numbers>

#include "memkern/errors.hpp"
#include "memkern/reference.hpp"
#include "memkern/time_grid.hpp"

using namespace memkern;

namespace {

/// Independent spectral-density oracle: numerically Fourier-transform the
/// time-domain reference with Simpson's rule, g_hat(w) = 2 Int_0^T g cos(wt).
double fourier_cosine(const ReferenceFunction& ref, double omega, double horizon,
                      std::size_t n) {
  if (n % 2 == 1) {
    ++n;
  }
  const double h = horizon / static_cast<double>(n);
  double sum = ref.evaluate(0.0) + ref.evaluate(horizon) * std::cos(omega * horizon);
  for (std::size_t k = 1; k < n; ++k) {
    const double t = h * static_cast<double>(k);
    sum += (k % 2 == 1 ? 4.0 : 2.0) * ref.evaluate(t) * std::cos(omega * t);
  }
  return 2.0 * sum * h / 3.0;
}

ReferenceFunction make(ReferenceKind kind) {
  ReferenceFunction ref;
  ref.kind = kind;
  return ref;
}

}  // namespace

TEST_CASE("reference values at characteristic times") {
  const double tau = 10.0;
  CHECK(make(ReferenceKind::Exponential).evaluate(0.0) == doctest::Approx(1.0));
  CHECK(make(ReferenceKind::Exponential).evaluate(tau) == doctest::Approx(0.5));
  CHECK(make(ReferenceKind::Exponential).evaluate(2 * tau) == doctest::Approx(0.25));

  const auto osc = make(ReferenceKind::Oscillation);
  CHECK(osc.evaluate(0.0) == doctest::Approx(1.0));
  // One full period of cos(2 pi t / tau) with envelope exp(-t / 2 tau).
  CHECK(osc.evaluate(tau) == doctest::Approx(std::exp(-0.5)));
  CHECK(osc.evaluate(0.25 * tau) == doctest::Approx(0.0).epsilon(1e-12));

  const auto lin = make(ReferenceKind::Linear);
  CHECK(lin.evaluate(0.0) == doctest::Approx(1.0));
  CHECK(lin.evaluate(tau) == doctest::Approx(0.5));
  CHECK(lin.evaluate(2 * tau) == doctest::Approx(0.0));
  CHECK(lin.evaluate(3 * tau) == doctest::Approx(0.0));

  const auto rec = make(ReferenceKind::Recurrence);
  CHECK(rec.evaluate(0.0) == doctest::Approx(1.0));
  // At the revival time the first Gaussian is dead and the echo is at its
  // peak with weight one half.
  CHECK(rec.evaluate(tau) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rec.evaluate(0.5 * tau) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("closed-form spectral densities match the numerical transform") {
  // The recurrence Gaussians die within ~0.5, but the echo at tau needs the
  // horizon to cover it; 600 covers every reference tail to < 1e-9.
  const double horizon = 600.0;
  const std::size_t n = 1 << 21;
  for (const auto kind : {ReferenceKind::Exponential, ReferenceKind::Oscillation,
                          ReferenceKind::Linear, ReferenceKind::Recurrence}) {
    const ReferenceFunction ref = make(kind);
    for (const double omega : {0.0, 0.05, 0.2, 0.3141592653589793, 0.7, 1.3, 2.5}) {
      const double oracle = fourier_cosine(ref, omega, horizon, n);
      const double closed = ref.spectral_density(omega);
      INFO("kind ", to_string(kind), " omega ", omega);
      CHECK(closed == doctest::Approx(oracle).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("spectral densities are even and nonnegative") {
  for (const auto kind : {ReferenceKind::Exponential, ReferenceKind::Oscillation,
                          ReferenceKind::Linear, ReferenceKind::Recurrence}) {
    const ReferenceFunction ref = make(kind);
    for (double omega = 0.0; omega <= 50.0; omega += 0.173) {
      INFO("kind ", to_string(kind), " omega ", omega);
      CHECK(ref.spectral_density(omega) >= 0.0);
      CHECK(ref.spectral_density(-omega) ==
            doctest::Approx(ref.spectral_density(omega)).epsilon(1e-14));
    }
  }
}

TEST_CASE("linear spectral density is smooth through its sinc zeros") {
  const auto lin = make(ReferenceKind::Linear);
  // sinc^2 vanishes at omega = pi k / tau; the clamp must not produce
  // negative values or jumps around the zeros.
  const double zero = std::numbers::pi / 10.0;
  CHECK(lin.spectral_density(zero) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(lin.spectral_density(zero + 1e-7) >= 0.0);
  CHECK(lin.spectral_density(zero - 1e-7) >= 0.0);
}

TEST_CASE("reference kind names round-trip") {
  for (const auto kind : {ReferenceKind::Exponential, ReferenceKind::Oscillation,
                          ReferenceKind::Linear, ReferenceKind::Recurrence}) {
    CHECK(reference_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(reference_kind_from_string("gaussian"), std::invalid_argument);
}

TEST_CASE("sample_reference matches pointwise evaluation") {
  const ReferenceFunction ref = make(ReferenceKind::Oscillation);
  const TimeGrid grid{0.25, 40};
  const Signal s = sample_reference(ref, grid);
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(s[k] == ref.evaluate(grid.time(k)));
  }
}

TEST_CASE("invalid reference parameters are rejected") {
  ReferenceFunction ref = make(ReferenceKind::Exponential);
  ref.tau = 0.0;
  CHECK_THROWS_AS(ref.validate(), std::invalid_argument);
  ref = make(ReferenceKind::Recurrence);
  ref.v = -1.0;
  CHECK_THROWS_AS(ref.validate(), std::invalid_argument);
}
