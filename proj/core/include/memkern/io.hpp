#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "memkern/kernel.hpp"
#include "memkern/spectral_model.hpp"
#include "memkern/time_grid.hpp"

namespace memkern {

/// Unreadable, truncated or malformed files.  Deliberately not derived from
/// Error: a bad file is a usage problem, not a violated physics invariant,
/// and the CLI maps the two onto different exit codes.
struct FileError final : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numbers in CSV files are written with 17 significant digits so that
/// reading them back reproduces the doubles bit for bit.
std::string format_double(double x);

/// A generic numeric table: comment lines (written with a leading "# "),
/// one header row, then rows of doubles.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Signal files use the two-column layout "# t,value".
void write_signal_csv(const std::filesystem::path& path, const Signal& s);
Signal read_signal_csv(const std::filesystem::path& path);

/// Kernel files carry the delta weight in a comment line and the smooth part
/// as "# tau,value" rows.
void write_kernel_csv(const std::filesystem::path& path, const KernelModel& k);
KernelModel read_kernel_csv(const std::filesystem::path& path);

/// Binary ensemble container (magic "MEMK1"): configuration echo, energies
/// and the observable matrix.  The eigendecomposition is not stored; it is
/// recomputed on load and cross-checked against the stored eigenvalues.
void save_ensemble(const std::filesystem::path& path, const EthEnsembleConfig& config,
                   const Spectrum& spectrum, const EthObservable& observable);

struct EnsembleFile {
  EthEnsembleConfig config;
  Spectrum spectrum;
  EthObservable observable;
};

EnsembleFile load_ensemble(const std::filesystem::path& path);

/// JSON sidecar next to the container: configuration echo plus norms for a
/// quick integrity glance (max |eigenvalue|, trace, Tr A^2, Frobenius norm,
/// normalization factor).
void write_ensemble_sidecar(const std::filesystem::path& path,
                            const EthEnsembleConfig& config,
                            const EthObservable& observable);

}  // namespace memkern
