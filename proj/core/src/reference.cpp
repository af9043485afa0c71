#include "memkern/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "memkern/errors.hpp"

namespace memkern {

namespace {

// sin(x)/x with the series takeover near zero.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    return 1.0 - x * x / 6.0;
  }
  return std::sin(x) / x;
}

double square(double x) { return x * x; }

}  // namespace

const char* to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::Exponential: return "exponential";
    case ReferenceKind::Oscillation: return "oscillation";
    case ReferenceKind::Linear: return "linear";
    case ReferenceKind::Recurrence: return "recurrence";
  }
  throw std::invalid_argument("unknown reference kind");
}

ReferenceKind reference_kind_from_string(std::string_view name) {
  if (name == "exponential") return ReferenceKind::Exponential;
  if (name == "oscillation") return ReferenceKind::Oscillation;
  if (name == "linear") return ReferenceKind::Linear;
  if (name == "recurrence") return ReferenceKind::Recurrence;
  throw std::invalid_argument("unknown reference kind: " + std::string(name));
}

void ReferenceFunction::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("reference: tau must be positive");
  }
  if (kind == ReferenceKind::Recurrence && (!(v > 0.0) || !std::isfinite(v))) {
    throw std::invalid_argument("reference: recurrence width v must be positive");
  }
}

double ReferenceFunction::evaluate(double t) const {
  const double at = std::abs(t);
  switch (kind) {
    case ReferenceKind::Exponential:
      return std::exp(-(std::numbers::ln2 / tau) * at);
    case ReferenceKind::Oscillation:
      return std::cos(2.0 * std::numbers::pi * t / tau) * std::exp(-at / (2.0 * tau));
    case ReferenceKind::Linear:
      return at <= 2.0 * tau ? 1.0 - at / (2.0 * tau) : 0.0;
    case ReferenceKind::Recurrence:
      return std::exp(-t * t / v) +
             0.5 * (std::exp(-square(t - tau) / v) + std::exp(-square(t + tau) / v));
  }
  throw std::invalid_argument("unknown reference kind");
}

double ReferenceFunction::spectral_density(double omega) const {
  // Closed forms of ghat(omega) = Int g(t) e^{-i omega t} dt:
  //   exponential  g = e^{-lambda |t|}          -> 2 lambda / (lambda^2 + w^2)
  //   oscillation  g = cos(w0 t) e^{-mu |t|}    -> mu/(mu^2 + (w - w0)^2)
  //                                                + mu/(mu^2 + (w + w0)^2)
  //   linear       triangle of half-width 2 tau -> 2 tau sinc^2(w tau)
  //   recurrence   three Gaussians              -> sqrt(pi v) e^{-w^2 v / 4}
  //                                                * (1 + cos(w tau))
  double value = 0.0;
  double at_zero = 0.0;
  switch (kind) {
    case ReferenceKind::Exponential: {
      const double lambda = std::numbers::ln2 / tau;
      value = 2.0 * lambda / (lambda * lambda + omega * omega);
      at_zero = 2.0 / lambda;
      break;
    }
    case ReferenceKind::Oscillation: {
      const double mu = 1.0 / (2.0 * tau);
      const double w0 = 2.0 * std::numbers::pi / tau;
      value = mu / (mu * mu + square(omega - w0)) + mu / (mu * mu + square(omega + w0));
      at_zero = 2.0 * mu / (mu * mu + w0 * w0);
      break;
    }
    case ReferenceKind::Linear: {
      value = 2.0 * tau * square(sinc(omega * tau));
      at_zero = 2.0 * tau;
      break;
    }
    case ReferenceKind::Recurrence: {
      value = std::sqrt(std::numbers::pi * v) * std::exp(-omega * omega * v / 4.0) *
              (1.0 + std::cos(omega * tau));
      at_zero = 2.0 * std::sqrt(std::numbers::pi * v);
      break;
    }
  }
  if (value < 0.0) {
    // The closed forms above are nonnegative; only rounding can take them
    // marginally below zero (e.g. 1 + cos at the zeros of the Recurrence
    // comb).  Anything beyond rounding scale means a broken formula.
    if (value < -1e-9 * at_zero) {
      throw NegativeSpectralDensity("spectral density " + std::to_string(value) +
                                    " at omega = " + std::to_string(omega));
    }
    value = 0.0;
  }
  return value;
}

Signal sample_reference(const ReferenceFunction& ref, const TimeGrid& grid) {
  ref.validate();
  return sample_function([&](double t) { return ref.evaluate(t); }, grid);
}

}  // namespace memkern
