#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memkern/open_dynamics.hpp"
#include "memkern/spectral_model.hpp"
#include "memkern/time_grid.hpp"

namespace memkern {

enum class ExperimentKind {
  Fig1,        // collapse of relaxation signals onto the target shape
  Theorem,     // oracle vs kernel route vs integral route under dephasing
  Corollary1,  // exponential reference: dephasing must be exactly neutral
  Corollary2,  // strong damping: freeze-out at rate K(0)/gamma
  Roundtrip,   // kernel extract + re-solve convergence order
  Laplace,     // kappatilde(s) = kappa(s + gamma) fingerprint
};

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

/// Every tolerance any experiment compares against, pinned in one place.
struct Tolerances {
  double two_level_pairwise = 1e-4;   // closed form vs oracle vs both routes
  double roundtrip_ratio_lo = 3.0;    // error ratio window under dt halving
  double roundtrip_ratio_hi = 5.0;
  double fig1_collapse = 0.05;        // median worst probe deviation
  double theorem_oracle = 0.05;       // |oracle - kernel route|
  double theorem_routes = 0.01;       // |kernel route - integral route|
  double corollary1_factor = 10.0;    // gamma > 0 deviation vs gamma = 0 floor
  double zeno_rate_rel = 0.10;        // fitted rate vs K(0)/gamma
  double mori_rel = 0.05;             // extracted K(0) vs operator formula
  double laplace_shift = 0.02;        // relative kappa deviation
  double trace_drift = 1e-9;          // oracle hygiene
  double hermiticity_defect = 1e-10;
  double min_eigenvalue = -1e-6;
  double closed_agreement = 1e-8;     // gamma = 0 oracle vs closed evaluation

  double by_name(const std::string& name) const;
  void set_by_name(const std::string& name, double value);  // std::invalid_argument
  static std::vector<std::string> names();
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Roundtrip;
  EthEnsembleConfig ensemble{};
  std::vector<double> gammas;
  std::vector<double> probes{0.25, 0.5, 0.75, 0.9};
  TimeGrid grid{};
  std::filesystem::path output_dir = "out";
  bool emit_svg = true;
  /// Extra runs Fig1 uses to compare against a smaller dimension.
  std::size_t scaling_dimension = 500;
  std::size_t scaling_seeds = 3;
  /// Run the exactly solvable two-level block where the experiment has one.
  bool include_two_level = true;
  Tolerances tol{};

  void validate() const;
};

/// Fill the per-experiment default geometry (grid, gammas, ensemble size).
ExperimentConfig default_config(ExperimentKind kind);

/// Flat key = value file; unknown keys are an error.  '#' starts a comment.
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// MEMK_SEED (decimal unsigned) overrides config.ensemble.seed.
void apply_env_overrides(ExperimentConfig& config);

/// Worker count for embarrassingly parallel loops: MEMK_THREADS when set,
/// otherwise the hardware concurrency, at least 1.
unsigned worker_threads();

/// One comparison a verify run makes.  `measured` is always recorded; the
/// bounds that apply are finite, the rest stay NaN.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  bool passed = false;
};

CheckResult check_upper(std::string name, double measured, double bound);
CheckResult check_window(std::string name, double measured, double lo, double hi);
CheckResult check_lower(std::string name, double measured, double bound);

/// Everything a run leaves behind besides its data files.
struct RunManifest {
  std::string experiment;
  std::string version;
  std::string config_echo;           // flat key = value lines, round-trippable
  std::vector<std::uint64_t> seeds;
  std::vector<CheckResult> checks;
  PropagationStats oracle_stats;     // aggregated over all oracle runs
  bool ran_oracle = false;
  double wall_seconds = 0.0;
  std::vector<std::string> artifacts;
  std::vector<std::pair<std::string, double>> values;  // named scalar results
  std::vector<std::string> notes;   // free-form caveats, e.g. tolerance provenance

  bool all_passed() const;
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

struct ExperimentResult {
  RunManifest manifest;
  bool passed() const { return manifest.all_passed(); }
};

ExperimentResult run_fig1(const ExperimentConfig& config);
ExperimentResult run_theorem(const ExperimentConfig& config);
ExperimentResult run_corollary1(const ExperimentConfig& config);
ExperimentResult run_corollary2(const ExperimentConfig& config);
ExperimentResult run_roundtrip(const ExperimentConfig& config);
ExperimentResult run_laplace(const ExperimentConfig& config);

/// Dispatch on config.experiment.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Two-level consistency block: for each gamma, compare the closed-form
/// damped-oscillator solution, the density-matrix oracle, the kernel route
/// and the integral route pairwise on [0, horizon].
struct TwoLevelReport {
  std::vector<double> gammas;
  std::vector<double> worst_pairwise;  // per gamma, max over the 6 pairs
  double worst = 0.0;
  PropagationStats oracle_stats;
};

TwoLevelReport two_level_theorem_report(const std::vector<double>& gammas,
                                        const TimeGrid& grid,
                                        PropagationStats* stats = nullptr);

/// Least-squares decay rate of a positive signal: slope of -ln s(t) for
/// t >= t_min restricted to samples with s > floor.
double fit_decay_rate(const Signal& s, double t_min, double floor);

}  // namespace memkern
