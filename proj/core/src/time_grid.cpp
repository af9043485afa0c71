#include "memkern/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace memkern {

TimeGrid TimeGrid::from_horizon(double dt, double horizon) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("TimeGrid: dt must be positive and finite");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid: horizon must be nonnegative and finite");
  }
  // ceil with a little slack so that horizon = n*dt does not round to n+1.
  auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  return TimeGrid{dt, steps};
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("TimeGrid: dt must be positive and finite");
  }
}

bool compatible(const TimeGrid& a, const TimeGrid& b) {
  return a.steps == b.steps && std::abs(a.dt - b.dt) <= 1e-12 * std::abs(a.dt);
}

Signal Signal::zeros(const TimeGrid& grid) {
  grid.validate();
  return Signal{grid, std::vector<double>(grid.size(), 0.0)};
}

void Signal::validate() const {
  grid.validate();
  if (values.size() != grid.size()) {
    throw std::invalid_argument("Signal: sample count does not match grid");
  }
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("Signal: non-finite sample");
    }
  }
}

Signal sample_function(const std::function<double(double)>& fn, const TimeGrid& grid) {
  Signal s = Signal::zeros(grid);
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = fn(grid.time(k));
  }
  return s;
}

double max_abs(const Signal& s) {
  double m = 0.0;
  for (double x : s.values) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

double max_abs_diff(const Signal& a, const Signal& b) {
  if (!compatible(a.grid, b.grid) || a.size() != b.size()) {
    throw std::invalid_argument("max_abs_diff: signals live on different grids");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    m = std::max(m, std::abs(a[k] - b[k]));
  }
  return m;
}

Signal downsample(const Signal& fine, std::size_t stride, const TimeGrid& coarse) {
  if (fine.grid.steps != coarse.steps * stride) {
    throw std::invalid_argument("downsample: grids not commensurate");
  }
  Signal out = Signal::zeros(coarse);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = fine[k * stride];
  }
  return out;
}

}  // namespace memkern
