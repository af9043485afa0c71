#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace memkern {

/// Uniform time grid t_k = k*dt, k = 0..steps (steps+1 samples including
/// both endpoints).  All signals in this library live on such grids.
struct TimeGrid {
  double dt = 1e-2;
  std::size_t steps = 0;

  std::size_t size() const { return steps + 1; }
  double time(std::size_t k) const { return dt * static_cast<double>(k); }
  double horizon() const { return dt * static_cast<double>(steps); }

  /// Grid reaching at least `horizon` with step `dt` (last point may
  /// overshoot by less than one step).
  static TimeGrid from_horizon(double dt, double horizon);

  void validate() const;  // throws std::invalid_argument
};

/// Two grids are compatible when they have the same number of steps and the
/// same dt up to relative rounding (1e-12).
bool compatible(const TimeGrid& a, const TimeGrid& b);

/// A real-valued function sampled on a TimeGrid.
struct Signal {
  TimeGrid grid;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
  double front() const { return values.front(); }

  static Signal zeros(const TimeGrid& grid);

  void validate() const;  // size matches grid, all entries finite
};

/// Sample fn(t_k) over the grid.
Signal sample_function(const std::function<double(double)>& fn,
                       const TimeGrid& grid);

double max_abs(const Signal& s);

/// max_k |a_k - b_k|; throws std::invalid_argument on grid mismatch.
double max_abs_diff(const Signal& a, const Signal& b);

/// Keep every stride-th sample of a finer signal; the grids must be
/// commensurate (fine.steps == coarse.steps * stride) or
/// std::invalid_argument is thrown.
Signal downsample(const Signal& fine, std::size_t stride, const TimeGrid& coarse);

}  // namespace memkern
