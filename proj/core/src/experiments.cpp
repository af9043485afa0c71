#include "memkern/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "memkern/errors.hpp"
#include "memkern/io.hpp"
#include "memkern/kernel.hpp"
#include "memkern/svg.hpp"
#include "memkern/two_level.hpp"
#include "memkern/version.hpp"

namespace memkern {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median of nothing");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SvgSeries make_series(std::string label, const Signal& s, std::string color = "",
                      bool dashed = false) {
  SvgSeries series;
  series.label = std::move(label);
  series.color = std::move(color);
  series.dashed = dashed;
  series.x.reserve(s.size());
  series.y.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    series.x.push_back(s.grid.time(k));
    series.y.push_back(s[k]);
  }
  return series;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    out += (j == 0 ? "" : ",") + format_double(values[j]);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    const double value = std::stod(cell, &pos);
    while (pos < cell.size() && cell[pos] == ' ') ++pos;
    if (pos != cell.size()) {
      throw std::invalid_argument("bad number in list: " + cell);
    }
    out.push_back(value);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

/// Run fn(0..count-1) on the worker pool; exceptions are rethrown on the
/// calling thread (first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      std::min<unsigned>(worker_threads(), static_cast<unsigned>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) {
          return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

void add_value(RunManifest& manifest, std::string name, double value) {
  manifest.values.emplace_back(std::move(name), value);
}

struct TolEntry {
  const char* name;
  double Tolerances::*member;
};

constexpr TolEntry kTolTable[] = {
    {"two_level_pairwise", &Tolerances::two_level_pairwise},
    {"roundtrip_ratio_lo", &Tolerances::roundtrip_ratio_lo},
    {"roundtrip_ratio_hi", &Tolerances::roundtrip_ratio_hi},
    {"fig1_collapse", &Tolerances::fig1_collapse},
    {"theorem_oracle", &Tolerances::theorem_oracle},
    {"theorem_routes", &Tolerances::theorem_routes},
    {"corollary1_factor", &Tolerances::corollary1_factor},
    {"zeno_rate_rel", &Tolerances::zeno_rate_rel},
    {"mori_rel", &Tolerances::mori_rel},
    {"laplace_shift", &Tolerances::laplace_shift},
    {"trace_drift", &Tolerances::trace_drift},
    {"hermiticity_defect", &Tolerances::hermiticity_defect},
    {"min_eigenvalue", &Tolerances::min_eigenvalue},
    {"closed_agreement", &Tolerances::closed_agreement},
};

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Fig1: return "fig1";
    case ExperimentKind::Theorem: return "theorem";
    case ExperimentKind::Corollary1: return "corollary1";
    case ExperimentKind::Corollary2: return "corollary2";
    case ExperimentKind::Roundtrip: return "roundtrip";
    case ExperimentKind::Laplace: return "laplace";
  }
  throw std::invalid_argument("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  if (name == "fig1") return ExperimentKind::Fig1;
  if (name == "theorem") return ExperimentKind::Theorem;
  if (name == "corollary1") return ExperimentKind::Corollary1;
  if (name == "corollary2") return ExperimentKind::Corollary2;
  if (name == "roundtrip") return ExperimentKind::Roundtrip;
  if (name == "laplace") return ExperimentKind::Laplace;
  throw std::invalid_argument("unknown experiment: " + std::string(name));
}

double Tolerances::by_name(const std::string& name) const {
  for (const auto& entry : kTolTable) {
    if (name == entry.name) {
      return this->*(entry.member);
    }
  }
  throw std::invalid_argument("unknown tolerance: " + name);
}

void Tolerances::set_by_name(const std::string& name, double value) {
  for (const auto& entry : kTolTable) {
    if (name == entry.name) {
      this->*(entry.member) = value;
      return;
    }
  }
  throw std::invalid_argument("unknown tolerance: " + name);
}

std::vector<std::string> Tolerances::names() {
  std::vector<std::string> out;
  for (const auto& entry : kTolTable) {
    out.emplace_back(entry.name);
  }
  return out;
}

void ExperimentConfig::validate() const {
  ensemble.validate();
  grid.validate();
  for (double gamma : gammas) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
      throw std::invalid_argument("experiment: gammas must be nonnegative");
    }
  }
  for (double probe : probes) {
    if (!(probe >= -1.0 && probe <= 1.0)) {
      throw std::invalid_argument("experiment: probes must lie in [-1, 1]");
    }
  }
  if (scaling_seeds < 1) {
    throw std::invalid_argument("experiment: need at least one seed");
  }
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::Fig1:
      // One tenth of the production dimension keeps the eigensolves at a few
      // seconds while the collapse is already convincing.
      cfg.ensemble.dimension = 2000;
      cfg.ensemble.half_width = 30.0;
      cfg.grid = TimeGrid{0.05, 600};  // [0, 3 tau] at tau/200
      cfg.scaling_dimension = 500;
      cfg.scaling_seeds = 3;
      break;
    case ExperimentKind::Theorem:
      // The oracle integrates a dense N x N state, so the ensemble is kept
      // small and the spectrum narrow (the reference densities live well
      // inside +-5 anyway).
      cfg.ensemble.dimension = 300;
      cfg.ensemble.half_width = 5.0;
      cfg.ensemble.reference.kind = ReferenceKind::Oscillation;
      cfg.gammas = {0.05, 0.2, 1.0};
      cfg.probes = {0.9};
      cfg.grid = TimeGrid{0.05, 600};
      break;
    case ExperimentKind::Corollary1: {
      cfg.ensemble.reference.kind = ReferenceKind::Exponential;
      cfg.ensemble.dimension = 160;
      cfg.ensemble.half_width = 5.0;
      const double beta = std::numbers::ln2 / cfg.ensemble.reference.tau;
      cfg.gammas = {0.01 * beta, 0.1 * beta, beta, 10.0 * beta, 100.0 * beta};
      cfg.probes = {0.9};
      cfg.grid = TimeGrid{0.05, 600};
      break;
    }
    case ExperimentKind::Corollary2:
      cfg.ensemble.dimension = 300;
      cfg.ensemble.half_width = 5.0;
      cfg.ensemble.reference.kind = ReferenceKind::Oscillation;
      cfg.gammas = {5.0, 10.0, 20.0, 40.0};
      cfg.grid = TimeGrid{0.005, 6000};
      break;
    case ExperimentKind::Roundtrip:
      // Horizon 15 keeps every reference inside its smooth region (the
      // triangle's derivative kink at 2 tau = 20 would dominate the error
      // with a first-order term and defeat the order measurement).
      cfg.grid = TimeGrid{0.02, 750};
      break;
    case ExperimentKind::Laplace:
      cfg.ensemble.dimension = 300;
      cfg.ensemble.half_width = 5.0;
      cfg.ensemble.reference.kind = ReferenceKind::Oscillation;
      cfg.gammas = {0.2};
      cfg.grid = TimeGrid{0.025, 1200};
      break;
  }
  return cfg;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("MEMK_THREADS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || n < 1 || n > 256) {
      throw std::invalid_argument("MEMK_THREADS must be an integer in [1, 256]");
    }
    return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void apply_env_overrides(ExperimentConfig& config) {
  if (const char* env = std::getenv("MEMK_SEED")) {
    char* end = nullptr;
    const unsigned long long seed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw std::invalid_argument("MEMK_SEED must be an unsigned integer");
    }
    config.ensemble.seed = seed;
  }
}

CheckResult check_upper(std::string name, double measured, double bound) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.upper = bound;
  c.passed = measured <= bound;
  return c;
}

CheckResult check_lower(std::string name, double measured, double bound) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.lower = bound;
  c.passed = measured >= bound;
  return c;
}

CheckResult check_window(std::string name, double measured, double lo, double hi) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.lower = lo;
  c.upper = hi;
  c.passed = measured >= lo && measured <= hi;
  return c;
}

bool RunManifest::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["version"] = version;
  j["config"] = config_echo;
  j["seeds"] = seeds;
  j["wall_seconds"] = wall_seconds;
  j["artifacts"] = artifacts;
  j["checks"] = nlohmann::json::array();
  for (const auto& check : checks) {
    nlohmann::json c;
    c["name"] = check.name;
    c["measured"] = check.measured;
    if (std::isfinite(check.lower)) {
      c["lower"] = check.lower;
    }
    if (std::isfinite(check.upper)) {
      c["upper"] = check.upper;
    }
    c["passed"] = check.passed;
    j["checks"].push_back(std::move(c));
  }
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [name, value] : this->values) {
    values[name] = value;
  }
  j["values"] = std::move(values);
  if (!notes.empty()) {
    j["notes"] = notes;
  }
  if (ran_oracle) {
    j["oracle_stats"] = {
        {"max_trace_error", oracle_stats.max_trace_error},
        {"max_hermiticity_defect", oracle_stats.max_hermiticity_defect},
        {"min_eigenvalue", oracle_stats.min_eigenvalue},
    };
  }
  return j.dump(2);
}

void RunManifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  out << to_json() << '\n';
}

namespace {

std::string echo_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "experiment = " << to_string(cfg.experiment) << '\n';
  out << "dimension = " << cfg.ensemble.dimension << '\n';
  out << "half_width = " << format_double(cfg.ensemble.half_width) << '\n';
  out << "reference = " << to_string(cfg.ensemble.reference.kind) << '\n';
  out << "tau = " << format_double(cfg.ensemble.reference.tau) << '\n';
  out << "v = " << format_double(cfg.ensemble.reference.v) << '\n';
  out << "seed = " << cfg.ensemble.seed << '\n';
  out << "spectral_cutoff = " << format_double(cfg.ensemble.spectral_cutoff) << '\n';
  out << "gammas = " << join_doubles(cfg.gammas) << '\n';
  out << "probes = " << join_doubles(cfg.probes) << '\n';
  out << "dt = " << format_double(cfg.grid.dt) << '\n';
  out << "horizon = " << format_double(cfg.grid.horizon()) << '\n';
  out << "output_dir = " << cfg.output_dir.string() << '\n';
  out << "emit_svg = " << (cfg.emit_svg ? "true" : "false") << '\n';
  out << "scaling_dimension = " << cfg.scaling_dimension << '\n';
  out << "scaling_seeds = " << cfg.scaling_seeds << '\n';
  out << "include_two_level = " << (cfg.include_two_level ? "true" : "false") << '\n';
  for (const auto& name : Tolerances::names()) {
    out << "tol_" << name << " = " << format_double(cfg.tol.by_name(name)) << '\n';
  }
  return out.str();
}

RunManifest start_manifest(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.experiment = to_string(cfg.experiment);
  manifest.version = kVersion;
  manifest.config_echo = echo_config(cfg);
  manifest.seeds = {cfg.ensemble.seed};
  std::filesystem::create_directories(cfg.output_dir);
  return manifest;
}

void finish_manifest(RunManifest& manifest, const ExperimentConfig& cfg,
                     const Timer& timer) {
  manifest.wall_seconds = timer.seconds();
  manifest.artifacts.push_back("manifest.json");
  manifest.write(cfg.output_dir / "manifest.json");
}

std::string gamma_tag(double gamma) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", gamma);
  return buf;
}

}  // namespace

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open config file " + path.string());
  }
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "experiment") {
        cfg.experiment = experiment_kind_from_string(value);
      } else if (key == "dimension") {
        cfg.ensemble.dimension = static_cast<std::size_t>(std::stoull(value));
      } else if (key == "half_width") {
        cfg.ensemble.half_width = std::stod(value);
      } else if (key == "reference") {
        cfg.ensemble.reference.kind = reference_kind_from_string(value);
      } else if (key == "tau") {
        cfg.ensemble.reference.tau = std::stod(value);
      } else if (key == "v") {
        cfg.ensemble.reference.v = std::stod(value);
      } else if (key == "seed") {
        cfg.ensemble.seed = std::stoull(value);
      } else if (key == "spectral_cutoff") {
        cfg.ensemble.spectral_cutoff = std::stod(value);
      } else if (key == "gammas") {
        cfg.gammas = split_doubles(value);
      } else if (key == "probes") {
        cfg.probes = split_doubles(value);
      } else if (key == "dt") {
        cfg.grid.dt = std::stod(value);
      } else if (key == "horizon") {
        cfg.grid = TimeGrid::from_horizon(cfg.grid.dt, std::stod(value));
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else if (key == "emit_svg") {
        cfg.emit_svg = value == "true" || value == "1";
      } else if (key == "scaling_dimension") {
        cfg.scaling_dimension = static_cast<std::size_t>(std::stoull(value));
      } else if (key == "scaling_seeds") {
        cfg.scaling_seeds = static_cast<std::size_t>(std::stoull(value));
      } else if (key == "include_two_level") {
        cfg.include_two_level = value == "true" || value == "1";
      } else if (key.rfind("tol_", 0) == 0) {
        cfg.tol.set_by_name(key.substr(4), std::stod(value));
      } else {
        throw std::invalid_argument("unknown key");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": " + key + ": " + e.what());
    }
  }
  return cfg;
}

double fit_decay_rate(const Signal& s, double t_min, double floor) {
  // Least-squares slope of ln s(t) over the usable window.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = s.grid.time(k);
    if (t < t_min || !(s[k] > floor)) {
      continue;
    }
    const double y = std::log(s[k]);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++n;
  }
  if (n < 8) {
    throw std::invalid_argument("fit_decay_rate: fewer than 8 usable samples");
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  return -(static_cast<double>(n) * sxy - sx * sy) / denom;
}

TwoLevelReport two_level_theorem_report(const std::vector<double>& gammas,
                                        const TimeGrid& grid, PropagationStats* stats) {
  const Spectrum spectrum = two_level_spectrum();
  const EthObservable observable = two_level_observable();
  const DiagonalState state = DiagonalState::pure(2, two_level_up_index());

  // a(t) = cos(2t) and g = C(t) = cos(2t), both produced by the same
  // machinery the ETH ensembles go through.
  const Signal a = expectation_closed(spectrum, observable, state, grid);
  const Signal g = autocorrelation(spectrum, observable, grid);

  TwoLevelReport report;
  report.gammas = gammas;
  for (double gamma : gammas) {
    LindbladConfig config{gamma, grid, Stepper::RungeKutta4};
    const Signal oracle =
        oracle_decohered(spectrum, observable, state, config, &report.oracle_stats);
    const Signal closed_form = damped_oscillator_solution(gamma, a[0], grid);
    const Signal scheme = predict_scheme(a, gamma);
    const Signal integral = predict_integral(a, g, gamma);

    const Signal* routes[4] = {&closed_form, &oracle, &scheme, &integral};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        worst = std::max(worst, max_abs_diff(*routes[i], *routes[j]));
      }
    }
    report.worst_pairwise.push_back(worst);
    report.worst = std::max(report.worst, worst);
  }
  if (stats != nullptr) {
    stats->merge(report.oracle_stats);
  }
  return report;
}

ExperimentResult run_fig1(const ExperimentConfig& cfg) {
  cfg.validate();
  Timer timer;
  RunManifest manifest = start_manifest(cfg);

  const ReferenceKind kinds[] = {ReferenceKind::Exponential, ReferenceKind::Oscillation,
                                 ReferenceKind::Linear, ReferenceKind::Recurrence};
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < cfg.scaling_seeds; ++i) {
    seeds.push_back(cfg.ensemble.seed + i);
  }
  manifest.seeds = seeds;

  struct Task {
    ReferenceKind kind;
    std::size_t dimension;
    std::uint64_t seed;
    bool canonical;  // emits the CSV/SVG artifacts
    double collapse = 0.0;
    double autocorr = 0.0;
    std::vector<double> probe_devs;  // per-probe max deviation, probes order
  };
  std::vector<Task> tasks;
  for (const auto kind : kinds) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      tasks.push_back({kind, cfg.ensemble.dimension, seeds[i], i == 0});
      tasks.push_back({kind, cfg.scaling_dimension, seeds[i], false});
    }
  }

  parallel_for(tasks.size(), [&](std::size_t index) {
    Task& task = tasks[index];
    EthEnsembleConfig ens = cfg.ensemble;
    ens.dimension = task.dimension;
    ens.seed = task.seed;
    ens.reference.kind = task.kind;

    const Spectrum spectrum = sample_spectrum(ens);
    const EthObservable observable = build_observable(spectrum, ens);
    const auto levels = select_initial_levels(observable, cfg.probes);
    const auto signals = expectation_closed_pure(spectrum, observable, levels, cfg.grid);
    const Signal g = sample_reference(ens.reference, cfg.grid);
    const Signal c = autocorrelation(spectrum, observable, cfg.grid);

    std::vector<std::pair<Signal, double>> pairs;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      pairs.emplace_back(signals[j],
                         observable.eigenvalues[static_cast<Eigen::Index>(levels[j])]);
    }
    const CollapseReport report = check_condition2(pairs, g);
    task.collapse = report.worst;
    task.autocorr = max_abs_diff(c, g);
    for (const auto& probe : report.probes) {
      task.probe_devs.push_back(probe.max_deviation);
    }

    if (task.canonical) {
      CsvTable table;
      table.comments = {"relaxation signals, dimension " + std::to_string(task.dimension) +
                        ", seed " + std::to_string(task.seed)};
      table.header = {"t", "g"};
      for (std::size_t j = 0; j < cfg.probes.size(); ++j) {
        table.header.push_back("probe_" + gamma_tag(cfg.probes[j]));
      }
      table.header.push_back("autocorrelation");
      for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
        std::vector<double> row = {cfg.grid.time(k), g[k]};
        for (const auto& s : signals) {
          row.push_back(s[k]);
        }
        row.push_back(c[k]);
        table.rows.push_back(std::move(row));
      }
      const std::string stem = std::string("fig1_") + to_string(task.kind);
      write_csv(cfg.output_dir / (stem + ".csv"), table);
      if (cfg.emit_svg) {
        std::vector<SvgSeries> series;
        series.push_back(make_series("g(t)", g, "#000000"));
        for (std::size_t j = 0; j < signals.size(); ++j) {
          Signal scaled = signals[j];
          for (std::size_t k = 0; k < scaled.size(); ++k) {
            scaled[k] /= pairs[j].second;
          }
          series.push_back(make_series("a_j = " + gamma_tag(pairs[j].second), scaled));
        }
        write_line_chart(cfg.output_dir / (stem + ".svg"),
                         std::string("collapse onto ") + to_string(task.kind), "t",
                         "signal / a_j", series);
      }
    }
  });

  // Artifact names are appended here, not in the worker tasks, so the
  // manifest bytes do not depend on thread completion order.
  for (const auto kind : kinds) {
    manifest.artifacts.push_back(std::string("fig1_") + to_string(kind) + ".csv");
    if (cfg.emit_svg) {
      manifest.artifacts.push_back(std::string("fig1_") + to_string(kind) + ".svg");
    }
  }

  for (const auto kind : kinds) {
    std::vector<double> main_devs, scaling_devs, autocorr_devs;
    std::vector<std::vector<double>> probe_devs(cfg.probes.size());
    for (const auto& task : tasks) {
      if (task.kind != kind) {
        continue;
      }
      (task.dimension == cfg.ensemble.dimension ? main_devs : scaling_devs)
          .push_back(task.collapse);
      if (task.dimension == cfg.ensemble.dimension) {
        autocorr_devs.push_back(task.autocorr);
        for (std::size_t j = 0; j < probe_devs.size(); ++j) {
          probe_devs[j].push_back(task.probe_devs[j]);
        }
      }
    }
    for (std::size_t j = 0; j < probe_devs.size(); ++j) {
      add_value(manifest,
                std::string("collapse_median_") + to_string(kind) + "_probe_" +
                    gamma_tag(cfg.probes[j]),
                median(probe_devs[j]));
    }
    const double main_median = median(main_devs);
    const double scaling_median = median(scaling_devs);
    manifest.checks.push_back(check_upper(
        std::string("fig1 collapse ") + to_string(kind), main_median, cfg.tol.fig1_collapse));
    manifest.checks.push_back(check_upper(
        std::string("fig1 scaling ") + to_string(kind), main_median, scaling_median));
    add_value(manifest, std::string("collapse_median_main_") + to_string(kind),
              main_median);
    add_value(manifest, std::string("collapse_median_scaling_") + to_string(kind),
              scaling_median);
    add_value(manifest, std::string("autocorr_median_") + to_string(kind),
              median(autocorr_devs));
    if (kind == ReferenceKind::Exponential) {
      manifest.checks.push_back(check_upper("fig1 autocorrelation exponential",
                                            median(autocorr_devs),
                                            cfg.tol.fig1_collapse));
    }
  }

  manifest.notes.push_back(
      "tol_fig1_collapse = " + format_double(cfg.tol.fig1_collapse) +
      " is a project choice: no external quantitative figure prescribes it, and "
      "it is calibrated for the production ensemble (dimension 20000), where the "
      "finite-size collapse floor drops below it.");

  finish_manifest(manifest, cfg, timer);
  return ExperimentResult{std::move(manifest)};
}

ExperimentResult run_theorem(const ExperimentConfig& cfg) {
  cfg.validate();
  Timer timer;
  RunManifest manifest = start_manifest(cfg);

  if (cfg.include_two_level) {
    const TwoLevelReport report = two_level_theorem_report(
        {0.5, 1.0, 2.0}, TimeGrid{1e-3, 10000}, &manifest.oracle_stats);
    manifest.ran_oracle = true;
    manifest.checks.push_back(check_upper("two-level routes pairwise", report.worst,
                                          cfg.tol.two_level_pairwise));
    for (std::size_t i = 0; i < report.gammas.size(); ++i) {
      add_value(manifest, "two_level_pairwise_gamma_" + gamma_tag(report.gammas[i]),
                report.worst_pairwise[i]);
    }
  }

  const Spectrum spectrum = sample_spectrum(cfg.ensemble);
  const EthObservable observable = build_observable(spectrum, cfg.ensemble);
  const auto levels = select_initial_levels(observable, {cfg.probes.at(0)});
  const Signal a =
      expectation_closed_pure(spectrum, observable, levels, cfg.grid).front();
  const double a0 = observable.eigenvalues[static_cast<Eigen::Index>(levels[0])];

  // The kernel route reads everything off the signal itself, so the integral
  // route must see the same shape: with g = a/a(0) both routes describe one
  // continuum object exactly (for any a, their Laplace transforms coincide),
  // and their discrete difference is pure quadrature error, O(dt^2).  Any
  // finite-size mismatch between a and the ideal reference then shows up
  // only where it belongs, in the oracle-vs-scheme physics residual.
  Signal g_self = a;
  for (std::size_t k = 0; k < g_self.size(); ++k) {
    g_self[k] /= a0;
  }
  const Signal c = autocorrelation(spectrum, observable, cfg.grid);
  const Signal g = sample_reference(cfg.ensemble.reference, cfg.grid);
  add_value(manifest, "probe_initial_value", a0);
  add_value(manifest, "collapse_deviation_probe",
            check_condition2({{a, a0}}, g).worst);
  add_value(manifest, "autocorr_deviation", max_abs_diff(c, g));

  const DiagonalState state = DiagonalState::pure(spectrum.dimension(), levels[0]);
  const double radius = std::max(std::abs(spectrum.energies[0]),
                                 std::abs(spectrum.energies[spectrum.energies.size() - 1]));

  CsvTable deviations;
  deviations.comments = {"worst absolute route disagreements per dephasing rate"};
  deviations.header = {"gamma", "oracle_scheme", "oracle_integral", "scheme_integral"};

  for (double gamma : cfg.gammas) {
    const Signal scheme = predict_scheme(a, gamma);
    const Signal integral = predict_integral(a, g_self, gamma);

    const std::size_t substeps = oracle_substeps(cfg.grid, radius, gamma);
    const TimeGrid fine{cfg.grid.dt / static_cast<double>(substeps),
                        cfg.grid.steps * substeps};
    LindbladConfig config{gamma, fine, Stepper::RungeKutta4};
    manifest.ran_oracle = true;
    const Signal oracle = downsample(
        oracle_decohered(spectrum, observable, state, config, &manifest.oracle_stats),
        substeps, cfg.grid);

    const double dev_oracle_scheme = max_abs_diff(oracle, scheme);
    const double dev_scheme_integral = max_abs_diff(scheme, integral);
    const double dev_oracle_integral = max_abs_diff(oracle, integral);
    const std::string tag = gamma_tag(gamma);
    manifest.checks.push_back(check_upper("theorem oracle vs scheme gamma=" + tag,
                                          dev_oracle_scheme, cfg.tol.theorem_oracle));
    manifest.checks.push_back(check_upper("theorem scheme vs integral gamma=" + tag,
                                          dev_scheme_integral, cfg.tol.theorem_routes));
    add_value(manifest, "dev_oracle_integral_gamma_" + tag, dev_oracle_integral);
    deviations.rows.push_back(
        {gamma, dev_oracle_scheme, dev_oracle_integral, dev_scheme_integral});

    CsvTable table;
    table.comments = {"dephasing routes, gamma = " + format_double(gamma)};
    table.header = {"t", "a", "oracle", "scheme", "integral"};
    for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
      table.rows.push_back({cfg.grid.time(k), a[k], oracle[k], scheme[k], integral[k]});
    }
    const std::string stem = std::string("theorem_") +
                             to_string(cfg.ensemble.reference.kind) + "_gamma" + tag;
    write_csv(cfg.output_dir / (stem + ".csv"), table);
    manifest.artifacts.push_back(stem + ".csv");
    if (cfg.emit_svg) {
      write_line_chart(cfg.output_dir / (stem + ".svg"),
                       "dephasing routes, gamma = " + tag, "t", "<A>(t)",
                       {make_series("closed a(t)", a, "#bbbbbb"),
                        make_series("oracle", oracle, "#1f77b4"),
                        make_series("kernel route", scheme, "#d62728", true),
                        make_series("integral route", integral, "#2ca02c", true)});
      manifest.artifacts.push_back(stem + ".svg");
    }
  }

  {
    const std::string stem = std::string("theorem_") +
                             to_string(cfg.ensemble.reference.kind) + "_deviations";
    write_csv(cfg.output_dir / (stem + ".csv"), deviations);
    manifest.artifacts.push_back(stem + ".csv");
  }

  manifest.checks.push_back(check_upper("oracle trace drift",
                                        manifest.oracle_stats.max_trace_error,
                                        cfg.tol.trace_drift));
  manifest.checks.push_back(check_upper("oracle hermiticity defect",
                                        manifest.oracle_stats.max_hermiticity_defect,
                                        cfg.tol.hermiticity_defect));
  manifest.checks.push_back(check_lower("oracle min eigenvalue",
                                        manifest.oracle_stats.min_eigenvalue,
                                        cfg.tol.min_eigenvalue));

  finish_manifest(manifest, cfg, timer);
  return ExperimentResult{std::move(manifest)};
}

ExperimentResult run_corollary1(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.ensemble.reference.kind != ReferenceKind::Exponential) {
    throw std::invalid_argument("corollary1 needs the exponential reference");
  }
  Timer timer;
  RunManifest manifest = start_manifest(cfg);

  // Exponential relaxation has a pure delta kernel, so damping it must not
  // change anything.  The gamma = 0 round trip sets the honest noise floor.
  const Signal a = sample_reference(cfg.ensemble.reference, cfg.grid);
  const KernelModel kernel = extract_kernel(a);
  const double beta = std::numbers::ln2 / cfg.ensemble.reference.tau;
  add_value(manifest, "delta_weight", kernel.delta_weight);
  add_value(manifest, "delta_weight_error", std::abs(kernel.delta_weight - beta));
  add_value(manifest, "smooth_kernel_max", max_abs(kernel.smooth));

  const Signal reconstruction = solve_volterra(kernel, a[0], cfg.grid);
  const double floor = max_abs_diff(reconstruction, a);
  add_value(manifest, "roundtrip_floor", floor);

  CsvTable table;
  table.comments = {"exponential reference: dephasing must leave the signal unchanged"};
  table.header = {"gamma", "max_deviation", "floor_ratio"};
  for (double gamma : cfg.gammas) {
    const Signal scheme = solve_volterra(damp_kernel(kernel, gamma), a[0], cfg.grid);
    const double dev = max_abs_diff(scheme, a);
    manifest.checks.push_back(check_upper("corollary1 invariance gamma=" + gamma_tag(gamma),
                                          dev, cfg.tol.corollary1_factor * floor));
    table.rows.push_back({gamma, dev, floor > 0.0 ? dev / floor : 0.0});
  }
  write_csv(cfg.output_dir / "corollary1_scheme.csv", table);
  manifest.artifacts.push_back("corollary1_scheme.csv");

  // Small-dimension counterpart with the projective dephasing map: the
  // unitary half-step is spectrally exact, so the gamma = 0 run measures
  // pure rounding and every deviation at gamma > 0 is genuine physics
  // (finite-size scatter around the corollary, not integrator error).
  {
    const Spectrum spectrum = sample_spectrum(cfg.ensemble);
    const EthObservable observable = build_observable(spectrum, cfg.ensemble);
    const auto levels = select_initial_levels(observable, {cfg.probes.at(0)});
    const Signal closed =
        expectation_closed_pure(spectrum, observable, levels, cfg.grid).front();
    const DiagonalState state = DiagonalState::pure(spectrum.dimension(), levels[0]);

    const std::size_t substeps = 4;
    const TimeGrid fine{cfg.grid.dt / static_cast<double>(substeps),
                        cfg.grid.steps * substeps};
    CsvTable map_table;
    map_table.comments = {"projective-map dephasing vs closed signal, dimension " +
                          std::to_string(cfg.ensemble.dimension)};
    map_table.header = {"gamma", "max_deviation_from_closed"};
    std::vector<double> map_gammas = {0.0};
    for (double gamma : cfg.gammas) {
      if (gamma * fine.dt < 1.0) {
        map_gammas.push_back(gamma);
      }
    }
    for (double gamma : map_gammas) {
      LindbladConfig config{gamma, fine, Stepper::DiscreteMap};
      manifest.ran_oracle = true;
      const Signal mapped = downsample(
          oracle_decohered(spectrum, observable, state, config, &manifest.oracle_stats),
          substeps, cfg.grid);
      const double dev = max_abs_diff(mapped, closed);
      map_table.rows.push_back({gamma, dev});
      add_value(manifest, "map_deviation_gamma_" + gamma_tag(gamma), dev);
    }
    write_csv(cfg.output_dir / "corollary1_map.csv", map_table);
    manifest.artifacts.push_back("corollary1_map.csv");
  }

  if (cfg.emit_svg) {
    const double gamma_big = cfg.gammas.empty() ? beta : cfg.gammas.back();
    Signal dev_curve = solve_volterra(damp_kernel(kernel, gamma_big), a[0], cfg.grid);
    for (std::size_t k = 0; k < dev_curve.size(); ++k) {
      dev_curve[k] -= a[k];
    }
    write_line_chart(cfg.output_dir / "corollary1_deviation.svg",
                     "kernel-route deviation at gamma = " + gamma_tag(gamma_big), "t",
                     "scheme - a", {make_series("deviation", dev_curve)});
    manifest.artifacts.push_back("corollary1_deviation.svg");
  }

  finish_manifest(manifest, cfg, timer);
  return ExperimentResult{std::move(manifest)};
}

ExperimentResult run_corollary2(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.ensemble.reference.kind == ReferenceKind::Exponential) {
    throw std::invalid_argument(
        "corollary2 needs a reference with a smooth kernel (the exponential kernel "
        "is a pure delta and never freezes)");
  }
  Timer timer;
  RunManifest manifest = start_manifest(cfg);

  // --- two-level block: every number known in closed form -----------------
  if (cfg.include_two_level) {
    const TimeGrid grid{1e-3, 10000};
    const Spectrum spectrum = two_level_spectrum();
    const EthObservable observable = two_level_observable();
    const DiagonalState state = DiagonalState::pure(2, two_level_up_index());
    const Signal a = expectation_closed(spectrum, observable, state, grid);

    const Eigen::MatrixXd sigma_x = (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished();
    const Eigen::MatrixXd sigma_z = (Eigen::MatrixXd(2, 2) << 1, 0, 0, -1).finished();
    const double k0 = mori_initial_value(sigma_x, sigma_z);
    add_value(manifest, "two_level_mori_k0", k0);

    CsvTable table;
    table.comments = {"strong dephasing on the two-level benchmark"};
    table.header = {"gamma", "rate_oracle", "rate_scheme", "rate_zeno", "ratio"};
    std::vector<double> rates;
    double rate_at_20 = 0.0, dev_zeno_at_20 = 0.0;
    bool saw_20 = false;
    for (double gamma : cfg.gammas) {
      LindbladConfig config{gamma, grid, Stepper::RungeKutta4};
      manifest.ran_oracle = true;
      const Signal oracle =
          oracle_decohered(spectrum, observable, state, config, &manifest.oracle_stats);
      const Signal scheme = predict_scheme(a, gamma);
      const double rate_oracle = fit_decay_rate(oracle, 1.0, 1e-3);
      const double rate_scheme = fit_decay_rate(scheme, 1.0, 1e-3);
      const double rate_zeno = k0 / gamma;
      rates.push_back(rate_oracle);
      table.rows.push_back(
          {gamma, rate_oracle, rate_scheme, rate_zeno, rate_oracle / rate_zeno});
      add_value(manifest, "two_level_rate_oracle_gamma_" + gamma_tag(gamma), rate_oracle);
      if (gamma == 20.0) {
        saw_20 = true;
        rate_at_20 = rate_oracle;
        const Signal zeno = zeno_approximation(k0, gamma, a[0], grid);
        dev_zeno_at_20 = max_abs_diff(oracle, zeno);
        if (cfg.emit_svg) {
          write_line_chart(cfg.output_dir / "corollary2_zeno.svg",
                           "overdamped freeze-out, gamma = 20", "t", "<A>(t)",
                           {make_series("oracle", oracle),
                            make_series("a(0) exp(-K(0) t / gamma)", zeno, "", true)});
          manifest.artifacts.push_back("corollary2_zeno.svg");
        }
      }
    }
    write_csv(cfg.output_dir / "corollary2_two_level.csv", table);
    manifest.artifacts.push_back("corollary2_two_level.csv");

    if (saw_20) {
      manifest.checks.push_back(check_upper("zeno rate two-level gamma=20",
                                            std::abs(rate_at_20 / (k0 / 20.0) - 1.0),
                                            cfg.tol.zeno_rate_rel));
      manifest.checks.push_back(
          check_upper("zeno curve two-level gamma=20", dev_zeno_at_20, 0.02));
    }
    if (rates.size() >= 2) {
      double worst_ratio = 0.0;
      for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
        worst_ratio = std::max(worst_ratio, rates[i + 1] / rates[i]);
      }
      manifest.checks.push_back(
          check_upper("zeno freezing monotone two-level", worst_ratio, 1.0));
    }
  }

  // --- ETH block: extracted K(0) against the operator formula -------------
  {
    const Spectrum spectrum = sample_spectrum(cfg.ensemble);
    const EthObservable observable = build_observable(spectrum, cfg.ensemble);
    const Signal c = autocorrelation(spectrum, observable, cfg.grid);
    const KernelModel kernel = extract_kernel(c);
    const double k0_extracted = kernel.smooth[0];

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(spectrum.energies.size(),
                                              spectrum.energies.size());
    h.diagonal() = spectrum.energies;
    const double k0_mori = mori_initial_value(h, observable.matrix);

    add_value(manifest, "eth_k0_extracted", k0_extracted);
    add_value(manifest, "eth_k0_mori", k0_mori);
    add_value(manifest, "eth_delta_weight", kernel.delta_weight);
    manifest.checks.push_back(check_upper("mori vs extracted K(0)",
                                          std::abs(k0_extracted - k0_mori) /
                                              std::abs(k0_mori),
                                          cfg.tol.mori_rel));
    manifest.checks.push_back(check_upper("extracted kernel delta weight",
                                          kernel.delta_weight,
                                          1e-2 * std::abs(k0_extracted)));
    write_kernel_csv(cfg.output_dir / "corollary2_kernel.csv", kernel);
    manifest.artifacts.push_back("corollary2_kernel.csv");

    CsvTable table;
    table.comments = {"kernel-route freeze-out of the autocorrelation"};
    table.header = {"gamma", "rate_scheme", "rate_zeno", "ratio"};
    std::vector<double> rates;
    for (double gamma : cfg.gammas) {
      const Signal frozen = solve_volterra(damp_kernel(kernel, gamma), c[0], cfg.grid);
      const double rate = fit_decay_rate(frozen, 0.25 * cfg.grid.horizon(), 1e-3);
      rates.push_back(rate);
      table.rows.push_back({gamma, rate, k0_mori / gamma, rate * gamma / k0_mori});
      add_value(manifest, "eth_rate_scheme_gamma_" + gamma_tag(gamma), rate);
    }
    write_csv(cfg.output_dir / "corollary2_eth.csv", table);
    manifest.artifacts.push_back("corollary2_eth.csv");
    if (rates.size() >= 2) {
      double worst_ratio = 0.0;
      for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
        worst_ratio = std::max(worst_ratio, rates[i + 1] / rates[i]);
      }
      manifest.checks.push_back(
          check_upper("zeno freezing monotone eth", worst_ratio, 1.0));
    }
  }

  finish_manifest(manifest, cfg, timer);
  return ExperimentResult{std::move(manifest)};
}

ExperimentResult run_roundtrip(const ExperimentConfig& cfg) {
  cfg.validate();
  Timer timer;
  RunManifest manifest = start_manifest(cfg);

  const ReferenceKind kinds[] = {ReferenceKind::Exponential, ReferenceKind::Oscillation,
                                 ReferenceKind::Linear, ReferenceKind::Recurrence};
  CsvTable table;
  table.comments = {"kernel extraction / re-solve round trip under dt halving"};
  table.header = {"reference", "err_coarse", "err_fine", "ratio", "delta_weight",
                  "smooth_k0"};

  // When the pair reproduces the input to rounding (the triangle is linear
  // on this horizon and every stencil is exact on it) the order measurement
  // is vacuous; both errors sitting at the floor counts as a pass.
  const double exact_floor = 1e-12;

  std::size_t kind_index = 0;
  for (const auto kind : kinds) {
    ReferenceFunction ref = cfg.ensemble.reference;
    ref.kind = kind;

    const TimeGrid coarse = cfg.grid;
    const TimeGrid fine{coarse.dt / 2.0, coarse.steps * 2};

    const Signal g_coarse = sample_reference(ref, coarse);
    const Signal g_fine = sample_reference(ref, fine);

    const KernelModel kernel = extract_kernel(g_coarse);
    const double err_coarse =
        max_abs_diff(solve_volterra(kernel, g_coarse[0], coarse), g_coarse);
    const KernelModel kernel_fine = extract_kernel(g_fine);
    const double err_fine =
        max_abs_diff(solve_volterra(kernel_fine, g_fine[0], fine), g_fine);

    const double ratio = err_fine > 0.0 ? err_coarse / err_fine : 0.0;
    const bool exact = err_coarse <= exact_floor && err_fine <= exact_floor;
    CheckResult check = check_window(std::string("roundtrip ratio ") + to_string(kind),
                                     ratio, cfg.tol.roundtrip_ratio_lo,
                                     cfg.tol.roundtrip_ratio_hi);
    if (exact) {
      check.passed = true;  // reproduced to rounding; order test vacuous
    }
    manifest.checks.push_back(check);
    add_value(manifest, std::string("roundtrip_err_coarse_") + to_string(kind),
              err_coarse);
    add_value(manifest, std::string("roundtrip_err_fine_") + to_string(kind), err_fine);

    table.rows.push_back({static_cast<double>(kind_index), err_coarse, err_fine, ratio,
                          kernel.delta_weight, kernel.smooth[0]});
    const std::string stem = std::string("kernel_") + to_string(kind);
    write_kernel_csv(cfg.output_dir / (stem + ".csv"), kernel);
    manifest.artifacts.push_back(stem + ".csv");
    if (cfg.emit_svg) {
      write_line_chart(
          cfg.output_dir / (std::string("roundtrip_") + to_string(kind) + ".svg"),
          std::string("round trip, ") + to_string(kind), "t", "g(t)",
          {make_series("g", g_coarse, "#000000"),
           make_series("reconstruction", solve_volterra(kernel, g_coarse[0], coarse),
                       "#d62728", true)});
      manifest.artifacts.push_back(std::string("roundtrip_") + to_string(kind) + ".svg");
    }
    ++kind_index;
  }
  table.comments.push_back("reference column: 0=exponential 1=oscillation 2=linear "
                           "3=recurrence");
  write_csv(cfg.output_dir / "roundtrip.csv", table);
  manifest.artifacts.push_back("roundtrip.csv");

  finish_manifest(manifest, cfg, timer);
  return ExperimentResult{std::move(manifest)};
}

ExperimentResult run_laplace(const ExperimentConfig& cfg) {
  cfg.validate();
  Timer timer;
  RunManifest manifest = start_manifest(cfg);

  CsvTable table;
  table.comments = {"kappa_tilde(s) against kappa(s + gamma)"};
  table.header = {"block", "s", "kappa_shifted_re", "kappa_shifted_im",
                  "kappa_tilde_re", "kappa_tilde_im", "rel_deviation"};

  auto record = [&](double block, const Signal& a, const Signal& at, double gamma,
                    const std::vector<std::complex<double>>& samples) {
    double worst = 0.0;
    for (const auto s : samples) {
      const auto shifted = laplace_of_signal(a, s + gamma).value;
      const auto plain = laplace_of_signal(at, s).value;
      const auto kappa_shifted = (a[0] - (s + gamma) * shifted) / shifted;
      const auto kappa_tilde = (at[0] - s * plain) / plain;
      const double dev =
          std::abs(kappa_tilde - kappa_shifted) / (std::abs(kappa_shifted) + 1e-12);
      worst = std::max(worst, dev);
      table.rows.push_back({block, s.real(), kappa_shifted.real(), kappa_shifted.imag(),
                            kappa_tilde.real(), kappa_tilde.imag(), dev});
    }
    return worst;
  };

  // --- two-level block: oracle-damped signal ------------------------------
  if (cfg.include_two_level) {
    const TimeGrid grid{1e-3, 10000};
    const Spectrum spectrum = two_level_spectrum();
    const EthObservable observable = two_level_observable();
    const DiagonalState state = DiagonalState::pure(2, two_level_up_index());
    const Signal a = expectation_closed(spectrum, observable, state, grid);
    const double gamma = 1.0;
    LindbladConfig config{gamma, grid, Stepper::RungeKutta4};
    manifest.ran_oracle = true;
    const Signal at =
        oracle_decohered(spectrum, observable, state, config, &manifest.oracle_stats);
    const std::vector<std::complex<double>> samples = {1.5, 2.0, 2.5, 3.0, 4.0};
    const double worst = check_laplace_shift(a, at, gamma, samples);
    record(0.0, a, at, gamma, samples);
    manifest.checks.push_back(
        check_upper("laplace shift two-level", worst, cfg.tol.laplace_shift));
  }

  // --- ETH block: kernel-route damped signal ------------------------------
  {
    const Spectrum spectrum = sample_spectrum(cfg.ensemble);
    const EthObservable observable = build_observable(spectrum, cfg.ensemble);
    const auto levels = select_initial_levels(observable, {cfg.probes.at(0)});
    const Signal a =
        expectation_closed_pure(spectrum, observable, levels, cfg.grid).front();
    const double gamma = cfg.gammas.at(0);
    const Signal at = predict_scheme(a, gamma);
    const std::vector<std::complex<double>> samples = {0.3, 0.5, 0.8, 1.2, 2.0};
    const double worst = check_laplace_shift(a, at, gamma, samples);
    record(1.0, a, at, gamma, samples);
    manifest.checks.push_back(
        check_upper("laplace shift eth", worst, cfg.tol.laplace_shift));
  }

  table.comments.push_back("block column: 0=two-level 1=eth");
  write_csv(cfg.output_dir / "laplace.csv", table);
  manifest.artifacts.push_back("laplace.csv");

  finish_manifest(manifest, cfg, timer);
  return ExperimentResult{std::move(manifest)};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::Fig1: return run_fig1(config);
    case ExperimentKind::Theorem: return run_theorem(config);
    case ExperimentKind::Corollary1: return run_corollary1(config);
    case ExperimentKind::Corollary2: return run_corollary2(config);
    case ExperimentKind::Roundtrip: return run_roundtrip(config);
    case ExperimentKind::Laplace: return run_laplace(config);
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace memkern
