#include "memkern/cli.hpp"

#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memkern/closed_dynamics.hpp"
#include "memkern/errors.hpp"
#include "memkern/experiments.hpp"
#include "memkern/io.hpp"
#include "memkern/kernel.hpp"
#include "memkern/open_dynamics.hpp"
#include "memkern/spectral_model.hpp"
#include "memkern/two_level.hpp"
#include "memkern/version.hpp"

namespace memkern {

namespace {

struct GridFlags {
  std::optional<double> dt;
  std::optional<double> horizon;

  void attach(CLI::App& app) {
    app.add_option("--dt", dt, "time step");
    app.add_option("--horizon", horizon, "final time");
  }
  TimeGrid resolve(const TimeGrid& base) const {
    return TimeGrid::from_horizon(dt.value_or(base.dt),
                                  horizon.value_or(base.horizon()));
  }
};

struct EnsembleFlags {
  std::optional<std::size_t> dimension;
  std::optional<double> half_width;
  std::optional<std::string> reference;
  std::optional<double> tau;
  std::optional<double> v;
  std::optional<std::uint64_t> seed;
  std::optional<double> cutoff;

  void attach(CLI::App& app) {
    app.add_option("--n,--dimension", dimension, "Hilbert-space dimension");
    app.add_option("--half-width", half_width, "spectrum half width");
    app.add_option("--reference", reference,
                   "reference dynamic (exponential|oscillation|linear|recurrence)");
    app.add_option("--tau", tau, "reference time scale");
    app.add_option("--v", v, "recurrence variance parameter");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--cutoff", cutoff, "spectral cutoff in units of the half width");
  }
  void apply(EthEnsembleConfig& cfg) const {
    if (dimension) cfg.dimension = *dimension;
    if (half_width) cfg.half_width = *half_width;
    if (reference) cfg.reference.kind = reference_kind_from_string(*reference);
    if (tau) cfg.reference.tau = *tau;
    if (v) cfg.reference.v = *v;
    if (seed) cfg.seed = *seed;
    if (cutoff) cfg.spectral_cutoff = *cutoff;
  }
};

EthObservable load_or_build(const std::string& ensemble_path,
                            const EnsembleFlags& flags, Spectrum& spectrum) {
  if (!ensemble_path.empty()) {
    EnsembleFile loaded = load_ensemble(ensemble_path);
    spectrum = std::move(loaded.spectrum);
    return std::move(loaded.observable);
  }
  EthEnsembleConfig cfg;
  flags.apply(cfg);
  ExperimentConfig env_holder;
  env_holder.ensemble = cfg;
  apply_env_overrides(env_holder);
  cfg = env_holder.ensemble;
  spectrum = sample_spectrum(cfg);
  return build_observable(spectrum, cfg);
}

void print_checks(const RunManifest& manifest) {
  for (const auto& check : manifest.checks) {
    std::printf("%s  %-42s measured=%.6g", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.measured);
    if (std::isfinite(check.lower)) {
      std::printf("  lower=%.6g", check.lower);
    }
    if (std::isfinite(check.upper)) {
      std::printf("  upper=%.6g", check.upper);
    }
    std::printf("\n");
  }
}

int run_generate(const EnsembleFlags& flags, const std::string& out,
                 bool sidecar) {
  EthEnsembleConfig cfg;
  flags.apply(cfg);
  ExperimentConfig env_holder;
  env_holder.ensemble = cfg;
  apply_env_overrides(env_holder);
  cfg = env_holder.ensemble;

  const Spectrum spectrum = sample_spectrum(cfg);
  const EthObservable observable = build_observable(spectrum, cfg);
  save_ensemble(out, cfg, spectrum, observable);
  if (sidecar) {
    write_ensemble_sidecar(out + ".json", cfg, observable);
  }
  std::printf("wrote %s (dimension %zu, reference %s, seed %llu)\n", out.c_str(),
              cfg.dimension, to_string(cfg.reference.kind),
              static_cast<unsigned long long>(cfg.seed));
  return 0;
}

int run_closed(const std::string& ensemble_path, const EnsembleFlags& flags,
               const GridFlags& grid_flags, std::vector<double> probes,
               const std::string& out) {
  Spectrum spectrum;
  const EthObservable observable = load_or_build(ensemble_path, flags, spectrum);
  const TimeGrid grid = grid_flags.resolve(TimeGrid{0.05, 600});
  if (probes.empty()) {
    probes = {0.25, 0.5, 0.75, 0.9};
  }

  const auto levels = select_initial_levels(observable, probes);
  const auto signals = expectation_closed_pure(spectrum, observable, levels, grid);

  // A single probe writes the canonical two-column signal so the output
  // feeds straight into `kernel` and `predict`; several probes write a wide
  // table with the ensemble autocorrelation alongside.
  if (signals.size() == 1) {
    write_signal_csv(out, signals.front());
    std::printf("wrote %s (1 probe, %zu samples)\n", out.c_str(), grid.size());
    return 0;
  }
  const Signal c = autocorrelation(spectrum, observable, grid);

  CsvTable table;
  table.comments = {"closed expectation values for probe levels"};
  table.header = {"t"};
  for (std::size_t j = 0; j < levels.size(); ++j) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "probe_%g",
                  observable.eigenvalues[static_cast<Eigen::Index>(levels[j])]);
    table.header.push_back(buf);
  }
  table.header.push_back("autocorrelation");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row = {grid.time(k)};
    for (const auto& s : signals) {
      row.push_back(s[k]);
    }
    row.push_back(c[k]);
    table.rows.push_back(std::move(row));
  }
  write_csv(out, table);
  std::printf("wrote %s (%zu probes, %zu samples)\n", out.c_str(), signals.size(),
              grid.size());
  return 0;
}

int run_oracle(const std::string& ensemble_path, const EnsembleFlags& flags,
               const GridFlags& grid_flags, double gamma, double probe,
               const std::string& stepper_name, const std::string& out) {
  Spectrum spectrum;
  const EthObservable observable = load_or_build(ensemble_path, flags, spectrum);
  const TimeGrid grid = grid_flags.resolve(TimeGrid{0.01, 1000});

  Stepper stepper;
  if (stepper_name == "rk4") {
    stepper = Stepper::RungeKutta4;
  } else if (stepper_name == "map") {
    stepper = Stepper::DiscreteMap;
  } else {
    throw std::invalid_argument("unknown stepper: " + stepper_name);
  }

  const auto levels = select_initial_levels(observable, {probe});
  const DiagonalState state = DiagonalState::pure(spectrum.dimension(), levels[0]);
  PropagationStats stats;
  Signal signal;
  if (stepper == Stepper::RungeKutta4) {
    // Integrate inside the RK4 stability region and report on the requested
    // grid.  The discrete map is left on the user's grid: its step size is
    // part of its definition (p = gamma * dt per step).
    const double radius = std::max(std::abs(spectrum.energies[0]),
                                   std::abs(spectrum.energies[spectrum.energies.size() - 1]));
    const std::size_t substeps = oracle_substeps(grid, radius, gamma);
    const TimeGrid fine{grid.dt / static_cast<double>(substeps), grid.steps * substeps};
    LindbladConfig config{gamma, fine, stepper};
    signal = downsample(oracle_decohered(spectrum, observable, state, config, &stats),
                        substeps, grid);
  } else {
    LindbladConfig config{gamma, grid, stepper};
    signal = oracle_decohered(spectrum, observable, state, config, &stats);
  }
  write_signal_csv(out, signal);
  std::printf("wrote %s\n", out.c_str());
  std::printf("trace drift %.3e, hermiticity defect %.3e, min eigenvalue %.3e\n",
              stats.max_trace_error, stats.max_hermiticity_defect,
              stats.min_eigenvalue);
  return 0;
}

int run_kernel(const std::string& in, const std::string& out, double gamma) {
  const Signal signal = read_signal_csv(in);
  KernelModel kernel = extract_kernel(signal);
  if (gamma > 0.0) {
    kernel = damp_kernel(kernel, gamma);
  }
  write_kernel_csv(out, kernel);
  std::printf("wrote %s (delta weight %.6g, K(0) %.6g)\n", out.c_str(),
              kernel.delta_weight, kernel.smooth[0]);
  return 0;
}

int run_predict(const std::string& in, const std::string& route, double gamma,
                const std::string& g_path, const std::string& out) {
  const Signal a = read_signal_csv(in);
  Signal result{a.grid, {}};
  if (route == "scheme") {
    result = predict_scheme(a, gamma);
  } else if (route == "integral") {
    if (g_path.empty()) {
      throw std::invalid_argument("the integral route needs --g <reference csv>");
    }
    result = predict_integral(a, read_signal_csv(g_path), gamma);
  } else {
    throw std::invalid_argument("unknown route: " + route);
  }
  write_signal_csv(out, result);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int run_verify(const std::string& experiment, const std::string& config_path,
               const EnsembleFlags& flags, const GridFlags& grid_flags,
               const std::vector<double>& gammas, const std::vector<double>& probes,
               const std::string& out_dir, const std::vector<std::string>& tol_overrides,
               bool no_svg, bool no_two_level) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = load_config_file(config_path);
    if (!experiment.empty()) {
      cfg.experiment = experiment_kind_from_string(experiment);
    }
  } else {
    if (experiment.empty()) {
      throw std::invalid_argument("verify needs an experiment name or --config");
    }
    cfg = default_config(experiment_kind_from_string(experiment));
  }

  flags.apply(cfg.ensemble);
  if (grid_flags.dt || grid_flags.horizon) {
    cfg.grid = grid_flags.resolve(cfg.grid);
  }
  if (!gammas.empty()) {
    cfg.gammas = gammas;
  }
  if (!probes.empty()) {
    cfg.probes = probes;
  }
  if (!out_dir.empty()) {
    cfg.output_dir = out_dir;
  }
  if (no_svg) {
    cfg.emit_svg = false;
  }
  if (no_two_level) {
    cfg.include_two_level = false;
  }
  for (const auto& override_text : tol_overrides) {
    const auto eq = override_text.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--tol expects name=value, got: " + override_text);
    }
    cfg.tol.set_by_name(override_text.substr(0, eq),
                        std::stod(override_text.substr(eq + 1)));
  }
  apply_env_overrides(cfg);
  cfg.validate();

  const ExperimentResult result = run_experiment(cfg);
  print_checks(result.manifest);
  std::printf("manifest: %s (%.1f s)\n",
              (cfg.output_dir / "manifest.json").string().c_str(),
              result.manifest.wall_seconds);
  return result.manifest.all_passed() ? 0 : 2;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"memory-kernel dephasing toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "sample an ensemble and save it");
  EnsembleFlags gen_flags;
  gen_flags.attach(*generate);
  std::string gen_out = "ensemble.memk";
  bool gen_no_sidecar = false;
  generate->add_option("--out", gen_out, "output container path");
  generate->add_flag("--no-sidecar", gen_no_sidecar, "skip the JSON sidecar");

  // closed -----------------------------------------------------------------
  auto* closed = app.add_subcommand("closed", "closed-system probe dynamics");
  EnsembleFlags closed_flags;
  closed_flags.attach(*closed);
  GridFlags closed_grid;
  closed_grid.attach(*closed);
  std::string closed_ensemble, closed_out = "closed.csv";
  std::vector<double> closed_probes;
  closed->add_option("--ensemble", closed_ensemble, "saved ensemble container");
  closed->add_option("--probe", closed_probes, "target probe value (repeatable)");
  closed->add_option("--out", closed_out,
                     "output CSV path (one probe: two-column signal; several: "
                     "wide table with autocorrelation)");

  // oracle -----------------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "dephasing master-equation reference");
  EnsembleFlags oracle_flags;
  oracle_flags.attach(*oracle);
  GridFlags oracle_grid;
  oracle_grid.attach(*oracle);
  std::string oracle_ensemble, oracle_out = "oracle.csv", oracle_stepper = "rk4";
  double oracle_gamma = 0.2, oracle_probe = 0.9;
  oracle->add_option("--ensemble", oracle_ensemble, "saved ensemble container");
  oracle->add_option("--gamma", oracle_gamma, "dephasing rate");
  oracle->add_option("--probe", oracle_probe, "target probe value");
  oracle->add_option("--stepper", oracle_stepper, "rk4 or map");
  oracle->add_option("--out", oracle_out, "output CSV path");

  // kernel -----------------------------------------------------------------
  auto* kernel = app.add_subcommand("kernel", "extract a memory kernel from a signal");
  std::string kernel_in, kernel_out = "kernel.csv";
  double kernel_gamma = 0.0;
  kernel->add_option("--in", kernel_in, "input signal CSV")->required();
  kernel->add_option("--out", kernel_out, "output kernel CSV");
  kernel->add_option("--gamma", kernel_gamma, "damp the smooth part before writing");

  // predict ----------------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "predict dephased dynamics");
  std::string predict_in, predict_out = "predict.csv", predict_route = "scheme";
  std::string predict_g;
  double predict_gamma = 0.2;
  predict->add_option("--in", predict_in, "closed signal CSV")->required();
  predict->add_option("--route", predict_route, "scheme or integral");
  predict->add_option("--gamma", predict_gamma, "dephasing rate");
  predict->add_option("--g", predict_g, "reference shape CSV (integral route)");
  predict->add_option("--out", predict_out, "output CSV path");

  // verify -----------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run an experiment with checks");
  EnsembleFlags verify_flags;
  verify_flags.attach(*verify);
  GridFlags verify_grid;
  verify_grid.attach(*verify);
  std::string verify_experiment, verify_config, verify_out;
  std::vector<double> verify_gammas, verify_probes;
  std::vector<std::string> verify_tols;
  bool verify_no_svg = false, verify_no_two_level = false;
  verify->add_option("experiment", verify_experiment,
                     "fig1|theorem|corollary1|corollary2|roundtrip|laplace");
  verify->add_option("--config", verify_config, "key = value config file");
  verify->add_option("--gamma", verify_gammas, "dephasing rate (repeatable)");
  verify->add_option("--probe", verify_probes, "probe value (repeatable)");
  verify->add_option("--out", verify_out, "output directory");
  verify->add_option("--tol", verify_tols, "tolerance override name=value (repeatable)");
  verify->add_flag("--no-svg", verify_no_svg, "skip SVG artifacts");
  verify->add_flag("--no-two-level", verify_no_two_level,
                   "skip the two-level benchmark block");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) {
      return run_generate(gen_flags, gen_out, !gen_no_sidecar);
    }
    if (closed->parsed()) {
      return run_closed(closed_ensemble, closed_flags, closed_grid, closed_probes,
                        closed_out);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle_ensemble, oracle_flags, oracle_grid, oracle_gamma,
                        oracle_probe, oracle_stepper, oracle_out);
    }
    if (kernel->parsed()) {
      return run_kernel(kernel_in, kernel_out, kernel_gamma);
    }
    if (predict->parsed()) {
      return run_predict(predict_in, predict_route, predict_gamma, predict_g,
                         predict_out);
    }
    if (verify->parsed()) {
      return run_verify(verify_experiment, verify_config, verify_flags, verify_grid,
                        verify_gammas, verify_probes, verify_out, verify_tols,
                        verify_no_svg, verify_no_two_level);
    }
  } catch (const Error& e) {
    // Physics or numerics invariant violated mid-run (positivity lost,
    // extraction blow-up, ...): distinct from a usage problem.
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace memkern
