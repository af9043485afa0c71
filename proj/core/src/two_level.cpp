#include "memkern/two_level.hpp"

#include <cmath>

namespace memkern {

Spectrum two_level_spectrum() {
  Spectrum s;
  s.energies = Eigen::Vector2d(-1.0, 1.0);
  s.half_width = 1.0;
  return s;
}

EthObservable two_level_observable() {
  // sigma_z maps each sigma_x eigenvector onto the other one, so in the
  // energy eigenbasis it is the flip matrix [[0, 1], [1, 0]].
  EthObservable obs;
  obs.matrix.resize(2, 2);
  obs.matrix << 0.0, 1.0, 1.0, 0.0;
  obs.eigenvalues = Eigen::Vector2d(-1.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  obs.eigenbasis.resize(2, 2);
  obs.eigenbasis << r, r, -r, r;
  obs.scale = 1.0;
  return obs;
}

std::size_t two_level_up_index() { return 1; }

Signal damped_oscillator_solution(double gamma, double z0, const TimeGrid& grid) {
  // z'' + gamma z' + 4 z = 0, z(0) = z0, z'(0) = 0.  Characteristic roots
  // -gamma/2 +- sqrt(gamma^2/4 - 4).
  const double disc = 0.25 * gamma * gamma - 4.0;
  return sample_function(
      [&](double t) {
        if (std::abs(disc) < 1e-8) {
          // critical damping (the two-root formulas lose precision here)
          return z0 * std::exp(-0.5 * gamma * t) * (1.0 + 0.5 * gamma * t);
        }
        if (disc < 0.0) {
          const double wd = std::sqrt(-disc);
          return z0 * std::exp(-0.5 * gamma * t) *
                 (std::cos(wd * t) + 0.5 * gamma / wd * std::sin(wd * t));
        }
        const double s = std::sqrt(disc);
        const double r1 = -0.5 * gamma - s;
        const double r2 = -0.5 * gamma + s;
        return z0 * (r2 * std::exp(r1 * t) - r1 * std::exp(r2 * t)) / (r2 - r1);
      },
      grid);
}

}  // namespace memkern
