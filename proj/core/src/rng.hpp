#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace memkern::detail {

/// Deterministic uniform/Gaussian source on top of mt19937_64.  The standard
/// distributions are implementation-defined, so mapping raw 64-bit draws by
/// hand is what keeps ensembles bit-identical across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1): top 53 bits of one draw.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller, two draws per value (the sine partner
  /// is discarded so the stream position stays a simple function of the
  /// call count).  The +1 keeps the log argument strictly positive.
  double normal() {
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace memkern::detail
