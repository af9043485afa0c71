#include "memkern/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "memkern/version.hpp"

namespace memkern {

namespace {

constexpr char kMagic[5] = {'M', 'E', 'M', 'K', '1'};
constexpr std::uint8_t kFormatVersion = 1;

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, mode);
  if (!out) {
    throw FileError("cannot open " + path.string() + " for writing");
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) {
    throw FileError("cannot open " + path.string());
  }
  return in;
}

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw FileError("ensemble file truncated");
  }
  return value;
}

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) {
    throw FileError("ensemble file truncated");
  }
}

/// Parse one CSV data row into doubles; returns false for non-numeric rows
/// (headers).
bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double value = std::strtod(cell.c_str(), &end);
    while (end != nullptr && *end == ' ') ++end;
    if (end == cell.c_str() || (end != nullptr && *end != '\0')) {
      return false;
    }
    row.push_back(value);
  }
  return !row.empty();
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  auto out = open_out(path, std::ios::out);
  for (const auto& comment : table.comments) {
    out << "# " << comment << '\n';
  }
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    out << (j == 0 ? "" : ",") << table.header[j];
  }
  if (!table.header.empty()) {
    out << '\n';
  }
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j == 0 ? "" : ",") << format_double(row[j]);
    }
    out << '\n';
  }
  if (!out) {
    throw FileError("failed writing " + path.string());
  }
}

void write_signal_csv(const std::filesystem::path& path, const Signal& s) {
  CsvTable table;
  table.comments = {"t,value"};
  table.rows.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    table.rows.push_back({s.grid.time(k), s[k]});
  }
  write_csv(path, table);
}

Signal read_signal_csv(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in);
  std::vector<double> times, values;
  std::string line;
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (!parse_row(line, row)) {
      continue;  // header row
    }
    if (row.size() != 2) {
      throw FileError("signal file " + path.string() + ": expected two columns");
    }
    times.push_back(row[0]);
    values.push_back(row[1]);
  }
  if (times.size() < 2) {
    throw FileError("signal file " + path.string() + ": need at least two samples");
  }
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) {
    throw FileError("signal file " + path.string() + ": non-increasing time column");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - dt * static_cast<double>(k)) > 1e-9 * (1.0 + times.back())) {
      throw FileError("signal file " + path.string() + ": time column not uniform");
    }
  }
  Signal s{TimeGrid{dt, times.size() - 1}, std::move(values)};
  s.validate();
  return s;
}

void write_kernel_csv(const std::filesystem::path& path, const KernelModel& k) {
  CsvTable table;
  table.comments = {"delta_weight=" + format_double(k.delta_weight), "tau,value"};
  table.rows.reserve(k.smooth.size());
  for (std::size_t j = 0; j < k.smooth.size(); ++j) {
    table.rows.push_back({k.smooth.grid.time(j), k.smooth[j]});
  }
  write_csv(path, table);
}

KernelModel read_kernel_csv(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in);
  KernelModel kernel;
  bool have_delta = false;
  std::vector<double> times, values;
  std::string line;
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      const auto pos = line.find("delta_weight=");
      if (pos != std::string::npos) {
        kernel.delta_weight = std::strtod(line.c_str() + pos + 13, nullptr);
        have_delta = true;
      }
      continue;
    }
    if (line.empty() || !parse_row(line, row)) {
      continue;
    }
    if (row.size() != 2) {
      throw FileError("kernel file " + path.string() + ": expected two columns");
    }
    times.push_back(row[0]);
    values.push_back(row[1]);
  }
  if (!have_delta) {
    throw FileError("kernel file " + path.string() + ": missing delta_weight comment");
  }
  if (times.size() < 2) {
    throw FileError("kernel file " + path.string() + ": need at least two samples");
  }
  kernel.smooth = Signal{TimeGrid{times[1] - times[0], times.size() - 1},
                         std::move(values)};
  kernel.validate();
  return kernel;
}

void save_ensemble(const std::filesystem::path& path, const EthEnsembleConfig& config,
                   const Spectrum& spectrum, const EthObservable& observable) {
  const std::size_t n = spectrum.dimension();
  if (observable.dimension() != n) {
    throw std::invalid_argument("save_ensemble: dimension mismatch");
  }
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::uint64_t>(n));
  write_pod(out, static_cast<std::uint64_t>(config.seed));
  write_pod(out, config.half_width);
  write_pod(out, config.spectral_cutoff);
  write_pod(out, static_cast<std::uint8_t>(config.reference.kind));
  write_pod(out, config.reference.tau);
  write_pod(out, config.reference.v);
  write_doubles(out, spectrum.energies.data(), n);
  write_doubles(out, observable.eigenvalues.data(), n);
  write_doubles(out, observable.matrix.data(), n * n);
  if (!out) {
    throw FileError("failed writing " + path.string());
  }
}

EnsembleFile load_ensemble(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  char magic[5];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FileError(path.string() + " is not an ensemble container (bad magic)");
  }
  if (read_pod<std::uint8_t>(in) != kFormatVersion) {
    throw FileError(path.string() + ": unsupported container version");
  }

  EnsembleFile file;
  const auto n = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  if (n < 2 || n > (1 << 20)) {
    throw FileError(path.string() + ": implausible dimension");
  }
  file.config.dimension = static_cast<std::size_t>(n);
  file.config.seed = read_pod<std::uint64_t>(in);
  file.config.half_width = read_pod<double>(in);
  file.config.spectral_cutoff = read_pod<double>(in);
  file.config.reference.kind = static_cast<ReferenceKind>(read_pod<std::uint8_t>(in));
  file.config.reference.tau = read_pod<double>(in);
  file.config.reference.v = read_pod<double>(in);
  file.config.validate();

  file.spectrum.half_width = file.config.half_width;
  file.spectrum.energies.resize(n);
  read_doubles(in, file.spectrum.energies.data(), static_cast<std::size_t>(n));
  file.spectrum.validate();

  Eigen::VectorXd stored_eigenvalues(n);
  read_doubles(in, stored_eigenvalues.data(), static_cast<std::size_t>(n));
  file.observable.matrix.resize(n, n);
  read_doubles(in, file.observable.matrix.data(), static_cast<std::size_t>(n * n));

  // The container stores only what defines the ensemble; the decomposition
  // is recomputed and cross-checked against the stored eigenvalues.
  eigensolve_symmetric(file.observable.matrix, file.observable.eigenvalues,
                       file.observable.eigenbasis);
  file.observable.scale = 1.0;  // stored matrix is already normalized
  if ((file.observable.eigenvalues - stored_eigenvalues).cwiseAbs().maxCoeff() > 1e-6) {
    throw FileError(path.string() + ": stored eigenvalues do not match the matrix");
  }
  return file;
}

void write_ensemble_sidecar(const std::filesystem::path& path,
                            const EthEnsembleConfig& config,
                            const EthObservable& observable) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = {
      {"dimension", config.dimension},
      {"half_width", config.half_width},
      {"seed", config.seed},
      {"spectral_cutoff", config.spectral_cutoff},
      {"reference",
       {{"kind", to_string(config.reference.kind)},
        {"tau", config.reference.tau},
        {"v", config.reference.v}}},
  };
  const auto n = observable.eigenvalues.size();
  j["norms"] = {
      {"max_abs_eigenvalue", std::max(std::abs(observable.eigenvalues[0]),
                                      std::abs(observable.eigenvalues[n - 1]))},
      {"trace", observable.matrix.trace()},
      {"trace_a2", observable.matrix.squaredNorm()},
      {"frobenius", observable.matrix.norm()},
      {"scale", observable.scale},
  };
  auto out = open_out(path, std::ios::out);
  out << j.dump(2) << '\n';
}

}  // namespace memkern
