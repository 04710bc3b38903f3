#pragma once

// Run configuration, result persistence and the text formats emitted by the
// command-line tool. Doubles are written with 17 significant digits so every
// file is a pure function of its inputs.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "wedge/degeneracy.hpp"
#include "wedge/optimizer.hpp"
#include "wedge/potential.hpp"

#ifndef WEDGEQM_VERSION
#define WEDGEQM_VERSION "0.0.0"
#endif

namespace wedge::io {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* kVersion = WEDGEQM_VERSION;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Units { au, ev };
Units parse_units(const std::string& text);
std::string to_string(Units units);
std::string energy_suffix(Units units);  // "Ha" or "eV"
double to_units(double hartree, Units units);

// "start:stop:step" (stop included when it lies on the lattice to 1e-9 of a
// step), a comma list, or one number. Every α must lie in (0, 2π].
std::vector<double> parse_alpha_spec(const std::string& text);

// "nr:ntheta:rmax".
potential::GridRequest parse_grid_spec(const std::string& text);

struct RunConfig {
  Units units = Units::ev;
  double quad_tolerance = 1e-12;  // final re-evaluation and reported integrals
  double opt_tolerance = 1e-12;   // simplex objective spread
  int restarts = 8;
  std::uint64_t seed = 20100601;
  fs::path out_dir = "wedgeqm-out";
  std::string alpha_spec;
  std::string grid_spec = "64:64:40";
  int state = 0;

  // Filled by validate().
  std::vector<double> alphas;
  potential::GridRequest grid;

  // Parses the α and grid specs and range-checks everything; UsageError.
  void validate();
  opt::OptimizerConfig optimizer(Execution exec = Execution::parallel) const;
  // Digest of everything that can change a computed number, plus the version.
  std::uint64_t hash() const;
  json to_json() const;
};

std::string format_double(double x);  // %.17g, "nan", "inf", "-inf"
std::string hex64(std::uint64_t v);

// Writes through a temporary file and rename, so readers never see a partial
// file. Creates parent directories. IoError on failure.
void write_file(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

std::string sha256_hex(const std::string& bytes);

json to_json(const trial::TrialParams& p);
trial::TrialParams params_from_json(const json& j);
json to_json(const energy::EnergyBreakdown& e);
energy::EnergyBreakdown energy_from_json(const json& j);
json to_json(const opt::OptimizationResult& r);
opt::OptimizationResult result_from_json(const json& j);
json state_json(const trial::SeparableState& s);

// Result summary with energies in both unit systems.
std::string summary_text(const opt::OptimizationResult& r);

std::string field_grid_csv(const potential::FieldGrid& grid, Units units);
json field_grid_json(const potential::FieldGrid& grid, Units units);

std::string sweep_csv(const std::vector<degeneracy::SweepRecord>& records, Units units);

// |ψ|² at cell centres of a polar grid over the opening.
struct DensityGrid {
  double alpha = 0.0;
  trial::StateKind kind = trial::StateKind::ground;
  std::vector<double> r;      // radial cell centres
  std::vector<double> theta;  // angular cell centres in (-α/2, α/2)
  std::vector<double> density;   // |ψ|², may underflow for delocalized states
  std::vector<double> relative;  // |ψ|² / max |ψ|² on the grid, never underflows
  double integral = 0.0;         // midpoint sum of |ψ|² r dr dθ
  double log10_peak = 0.0;       // log10 max |ψ|²
};

DensityGrid density_grid(const trial::SeparableState& state, const potential::GridRequest& grid,
                         Execution exec = Execution::parallel);
std::string density_csv(const DensityGrid& grid);

// Cached optima keyed by (kind, α, config hash, seed). The directory lock
// is exclusive and held for the lifetime of the object.
class ResultCache {
 public:
  ResultCache(fs::path dir, std::uint64_t config_hash, std::uint64_t seed, double tolerance);
  ~ResultCache();
  ResultCache(const ResultCache&) = delete;
  ResultCache& operator=(const ResultCache&) = delete;

  fs::path path_for(trial::StateKind kind, double alpha) const;
  // A hit is re-evaluated once at the stored parameters; an entry that no
  // longer reproduces its energy to 1e-9 relative is treated as a miss.
  std::optional<opt::OptimizationResult> load(trial::StateKind kind, double alpha) const;
  void store(const opt::OptimizationResult& result) const;

  int hits() const { return hits_; }
  int misses() const { return misses_; }

 private:
  fs::path dir_;
  std::uint64_t hash_;
  std::uint64_t seed_;
  double tolerance_;
  int lock_fd_ = -1;
  mutable std::atomic<int> hits_ = 0;
  mutable std::atomic<int> misses_ = 0;
};

// Manifest of a run directory. write() lists every file under the root
// with its SHA-256; provenance of files from earlier commands is kept.
class Manifest {
 public:
  static constexpr const char* kFileName = "manifest.json";

  Manifest(fs::path root, const RunConfig& config, std::string command);
  void produced(const fs::path& file);
  void note(const std::string& key, json value);
  void write();

 private:
  fs::path root_;
  json config_;
  std::uint64_t config_hash_;
  std::string command_;
  std::string started_;
  double start_seconds_;
  std::vector<std::string> produced_;
  json notes_ = json::object();
};

}  // namespace wedge::io
