#include "wedge/io.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "wedge/parallel.hpp"

namespace wedge::io {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw UsageError(what + ": trailing characters in '" + text + "'");
  if (!std::isfinite(v)) throw UsageError(what + ": '" + text + "' is not finite");
  return v;
}

int parse_count(const std::string& text, const std::string& what) {
  const double v = parse_number(text, what);
  if (v != std::floor(v) || v < 1 || v > 1e6) throw UsageError(what + " must be a positive integer");
  return static_cast<int>(v);
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double monotonic_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

// json stores non-finite doubles as null.
double number_or_nan(const json& j) { return j.is_number() ? j.get<double>() : kNaN; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

Units parse_units(const std::string& text) {
  if (text == "au" || text == "hartree") return Units::au;
  if (text == "ev" || text == "eV") return Units::ev;
  throw UsageError("units must be 'au' or 'ev', got '" + text + "'");
}

std::string to_string(Units units) { return units == Units::au ? "au" : "ev"; }
std::string energy_suffix(Units units) { return units == Units::au ? "Ha" : "eV"; }

double to_units(double hartree, Units units) {
  return units::convert(hartree, units == Units::au ? units::System::atomic : units::System::electronvolt);
}

std::vector<double> parse_alpha_spec(const std::string& text) {
  if (text.empty()) throw UsageError("empty α specification");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("α range must be start:stop:step, got '" + text + "'");
    const double start = parse_number(parts[0], "α start");
    const double stop = parse_number(parts[1], "α stop");
    const double step = parse_number(parts[2], "α step");
    if (!(step > 0.0)) throw UsageError("α step must be positive");
    if (stop < start) throw UsageError("α stop lies below start");
    const double count = std::floor((stop - start) / step + 1e-9);
    if (count > 1e5) throw UsageError("α range has too many points");
    // start + i·step rather than accumulation, so values do not drift.
    for (int i = 0; i <= static_cast<int>(count); ++i) out.push_back(start + i * step);
  } else {
    for (const auto& part : split(text, ',')) out.push_back(parse_number(part, "α"));
  }
  for (double a : out)
    if (!(a > 0.0 && a <= 2.0 * kPi))
      throw UsageError("α = " + format_double(a) + " lies outside (0, 2π]");
  return out;
}

potential::GridRequest parse_grid_spec(const std::string& text) {
  if (text.empty()) throw UsageError("empty grid specification");
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("grid must be nr:ntheta:rmax, got '" + text + "'");
  potential::GridRequest g;
  g.radial_count = parse_count(parts[0], "grid nr");
  g.angular_count = parse_count(parts[1], "grid ntheta");
  g.r_max = parse_number(parts[2], "grid rmax");
  if (g.radial_count < 4 || g.angular_count < 4) throw UsageError("grid counts must be >= 4");
  if (!(g.r_max > 0.0)) throw UsageError("grid rmax must be positive");
  return g;
}

void RunConfig::validate() {
  if (!(quad_tolerance > 0.0 && quad_tolerance < 1e-3))
    throw UsageError("--tol-quad must lie in (0, 1e-3)");
  if (!(opt_tolerance > 0.0 && opt_tolerance < 1e-3))
    throw UsageError("--tol-opt must lie in (0, 1e-3)");
  if (restarts < 1) throw UsageError("--restarts must be >= 1");
  if (state < 0 || state > 2) throw UsageError("--state must be 0, 1 or 2");
  if (out_dir.empty()) throw UsageError("empty output directory");
  alphas = alpha_spec.empty() ? std::vector<double>{} : parse_alpha_spec(alpha_spec);
  grid = parse_grid_spec(grid_spec);
}

opt::OptimizerConfig RunConfig::optimizer(Execution exec) const {
  opt::OptimizerConfig c;
  c.restarts = restarts;
  c.seed = seed;
  c.objective_spread_tolerance = opt_tolerance;
  c.final_tolerance = quad_tolerance;
  c.search_tolerance = std::max(quad_tolerance, 1e-8);
  c.execution = exec;
  c.validate();
  return c;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = optimizer().hash();
  h = fnv(h, kVersion);
  return h;
}

json RunConfig::to_json() const {
  json j;
  j["units"] = to_string(units);
  j["tol_quad"] = quad_tolerance;
  j["tol_opt"] = opt_tolerance;
  j["restarts"] = restarts;
  j["seed"] = seed;
  j["out"] = out_dir.string();
  j["alphas_spec"] = alpha_spec;
  j["alphas"] = alphas;
  j["grid"] = grid_spec;
  j["state"] = state;
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         hex64(std::hash<std::string>{}(path.string()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 digest failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

json to_json(const trial::TrialParams& p) {
  return json{{"m", p.m}, {"n", p.n}, {"p", p.p}, {"q", p.q}};
}

trial::TrialParams params_from_json(const json& j) {
  trial::TrialParams p;
  p.m = j.at("m").get<double>();
  p.n = j.at("n").get<double>();
  p.p = j.at("p").get<double>();
  p.q = j.at("q").get<double>();
  return p;
}

json to_json(const energy::EnergyBreakdown& e) {
  return json{{"kinetic", e.kinetic},
              {"potential", e.potential},
              {"total", e.total},
              {"virial_residual", e.virial_residual}};
}

energy::EnergyBreakdown energy_from_json(const json& j) {
  energy::EnergyBreakdown e;
  e.kinetic = number_or_nan(j.at("kinetic"));
  e.potential = number_or_nan(j.at("potential"));
  e.total = number_or_nan(j.at("total"));
  e.virial_residual = number_or_nan(j.at("virial_residual"));
  return e;
}

json to_json(const opt::OptimizationResult& r) {
  json j;
  j["kind"] = trial::to_string(r.kind);
  j["state"] = static_cast<int>(r.kind);
  j["alpha"] = r.alpha;
  j["params"] = to_json(r.best_params);
  j["energy_au"] = to_json(r.best_energy);
  j["energy_ev"] = units::hartree_to_ev(r.best_energy.total);
  if (r.kind == trial::StateKind::excited) {
    j["orthogonality_a"] = r.orthogonality_a;
    if (r.ground_params) j["ground_params"] = to_json(*r.ground_params);
  }
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["boundary_active"] = {{"m", r.boundary_active[0]},
                          {"n", r.boundary_active[1]},
                          {"p", r.boundary_active[2]},
                          {"q", r.boundary_active[3]}};
  json restarts = json::array();
  for (double e : r.restart_energies) restarts.push_back(std::isfinite(e) ? json(e) : json(nullptr));
  j["restart_energies"] = restarts;
  return j;
}

opt::OptimizationResult result_from_json(const json& j) {
  opt::OptimizationResult r;
  r.kind = trial::state_kind_from_index(j.at("state").get<int>());
  r.alpha = j.at("alpha").get<double>();
  r.best_params = params_from_json(j.at("params"));
  r.best_energy = energy_from_json(j.at("energy_au"));
  if (j.contains("orthogonality_a")) r.orthogonality_a = j["orthogonality_a"].get<double>();
  if (j.contains("ground_params")) r.ground_params = params_from_json(j["ground_params"]);
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  const auto& b = j.at("boundary_active");
  r.boundary_active = {b.at("m").get<bool>(), b.at("n").get<bool>(), b.at("p").get<bool>(),
                       b.at("q").get<bool>()};
  for (const auto& e : j.at("restart_energies"))
    r.restart_energies.push_back(e.is_number() ? e.get<double>()
                                               : std::numeric_limits<double>::infinity());
  return r;
}

json state_json(const trial::SeparableState& s) {
  json j;
  j["kind"] = trial::to_string(s.kind());
  j["alpha"] = s.alpha();
  j["params"] = to_json(s.params());
  j["log_normalization"] = s.log_normalization();
  j["normalization"] = s.normalization();
  j["phase"] = s.phase();
  j["parity"] = s.parity();
  if (s.kind() == trial::StateKind::excited) {
    j["orthogonality_a"] = s.orthogonality_a();
    j["ground_params"] = to_json(s.reference_params());
  }
  return j;
}

std::string summary_text(const opt::OptimizationResult& r) {
  std::ostringstream os;
  os.precision(10);
  os << "state " << static_cast<int>(r.kind) << " (" << trial::to_string(r.kind) << ") at alpha = "
     << r.alpha << " rad\n";
  os << "  E = " << r.best_energy.total << " Ha = " << units::hartree_to_ev(r.best_energy.total)
     << " eV\n";
  os << "  T = " << r.best_energy.kinetic << " Ha, V = " << r.best_energy.potential << " Ha\n";
  os << "  virial |2T+V|/|E| = " << r.best_energy.virial_residual << "\n";
  os << "  m = " << r.best_params.m << ", n = " << r.best_params.n << ", p = " << r.best_params.p
     << ", q = " << r.best_params.q << "\n";
  if (r.kind == trial::StateKind::excited) os << "  a = " << r.orthogonality_a << "\n";
  os << "  boundary (m n p q): " << r.boundary_active[0] << r.boundary_active[1]
     << r.boundary_active[2] << r.boundary_active[3] << ", converged = " << r.converged << "\n";
  return os.str();
}

std::string field_grid_csv(const potential::FieldGrid& grid, Units units) {
  std::string out;
  out += "# image potential energy e*phi of a unit charge, opening alpha = " +
         format_double(grid.alpha) + " rad\n";
  out += "# r and x, y in bohr, theta in rad from the bisector, e_phi in " +
         energy_suffix(units) + "; rows outside the opening carry nan\n";
  out += "r,theta,x,y,e_phi,inside\n";
  const std::size_t nt = grid.angular_nodes.size();
  for (std::size_t i = 0; i < grid.radial_nodes.size(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double r = grid.radial_nodes[i];
      const double t = grid.angular_nodes[j];
      const bool in = grid.is_inside(i, j);
      out += format_double(r) + ',' + format_double(t) + ',' + format_double(r * std::cos(t)) +
             ',' + format_double(r * std::sin(t)) + ',' +
             format_double(in ? to_units(grid.value(i, j), units) : kNaN) + ',' +
             (in ? "1" : "0") + '\n';
    }
  }
  return out;
}

json field_grid_json(const potential::FieldGrid& grid, Units units) {
  json j;
  j["alpha"] = grid.alpha;
  j["units"] = energy_suffix(units);
  j["radial_nodes"] = grid.radial_nodes;
  j["angular_nodes"] = grid.angular_nodes;
  json rows = json::array();
  for (std::size_t i = 0; i < grid.radial_nodes.size(); ++i) {
    json row = json::array();
    for (std::size_t j2 = 0; j2 < grid.angular_nodes.size(); ++j2)
      row.push_back(grid.is_inside(i, j2) ? json(to_units(grid.value(i, j2), units))
                                          : json(nullptr));
    rows.push_back(row);
  }
  j["e_phi"] = rows;
  return j;
}

std::string sweep_csv(const std::vector<degeneracy::SweepRecord>& records, Units units) {
  const std::string u = "_" + energy_suffix(units);
  std::string out = "alpha_rad,E0" + u + ",E1" + u + ",E2" + u + ",gap01" + u + ",gap02" + u +
                    ",splitting" + u +
                    ",splitting_log10_au,virial0,virial1,virial2,boundary_flags,status\n";
  for (const auto& rec : records) {
    auto e = [&](double v) { return format_double(rec.ok ? to_units(v, units) : kNaN); };
    auto plain = [&](double v) { return format_double(rec.ok ? v : kNaN); };
    std::string flags;
    for (int k = 0; k < 3; ++k) {
      if (k) flags += '|';
      for (bool b : rec.boundary[k]) flags += b ? '1' : '0';
    }
    out += format_double(rec.alpha) + ',' + e(rec.energy[0]) + ',' + e(rec.energy[1]) + ',' +
           e(rec.energy[2]) + ',' + e(rec.gap01) + ',' + e(rec.gap02) + ',' +
           e(rec.splitting) + ',' + plain(rec.splitting_log10) + ',' + plain(rec.virial[0]) +
           ',' + plain(rec.virial[1]) + ',' + plain(rec.virial[2]) + ',' +
           (rec.ok ? flags : std::string()) + ',' + csv_quote(rec.status) + '\n';
  }
  return out;
}

DensityGrid density_grid(const trial::SeparableState& state, const potential::GridRequest& grid,
                         Execution exec) {
  if (grid.radial_count < 1 || grid.angular_count < 1 || !(grid.r_max > 0.0))
    throw DomainError("density grid needs positive counts and r_max");
  DensityGrid d;
  d.alpha = state.alpha();
  d.kind = state.kind();
  const int nr = grid.radial_count;
  const int nt = grid.angular_count;
  const double dr = grid.r_max / nr;
  const double dt = state.alpha() / nt;
  for (int i = 0; i < nr; ++i) d.r.push_back((i + 0.5) * dr);
  for (int j = 0; j < nt; ++j) d.theta.push_back(-0.5 * state.alpha() + (j + 0.5) * dt);

  // ψ/N stays representable where N itself may not be.
  const double log_n = state.log_normalization();
  std::vector<double> unit(static_cast<std::size_t>(nr) * nt);
  for_each_index(nr, exec, [&](int i) {
    for (int j = 0; j < nt; ++j) unit[i * nt + j] = state.evaluate(d.r[i], d.theta[j], log_n);
  });
  double peak = 0.0;
  for (double v : unit) peak = std::max(peak, v * v);
  d.density.resize(unit.size());
  d.relative.resize(unit.size());
  double sum = 0.0;  // serial, fixed order
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * nt + j;
      const double u2 = unit[idx] * unit[idx];
      d.relative[idx] = peak > 0.0 ? u2 / peak : 0.0;
      d.density[idx] = std::exp(2.0 * log_n) * u2;
      sum += u2 * d.r[i];
    }
  }
  d.integral = std::exp(2.0 * log_n + std::log(sum * dr * dt));
  d.log10_peak = (2.0 * log_n + std::log(peak)) / std::numbers::ln10;
  return d;
}

std::string density_csv(const DensityGrid& grid) {
  std::string out;
  out += "# |psi|^2 in bohr^-2 for state " + trial::to_string(grid.kind) +
         ", opening alpha = " + format_double(grid.alpha) + " rad\n";
  out += "# density_rel is |psi|^2 divided by its grid maximum (log10 max = " +
         format_double(grid.log10_peak) + "); grid integral = " + format_double(grid.integral) +
         "\n";
  out += "r,theta,x,y,density,density_rel\n";
  const std::size_t nt = grid.theta.size();
  for (std::size_t i = 0; i < grid.r.size(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double r = grid.r[i];
      const double t = grid.theta[j];
      out += format_double(r) + ',' + format_double(t) + ',' + format_double(r * std::cos(t)) +
             ',' + format_double(r * std::sin(t)) + ',' + format_double(grid.density[i * nt + j]) +
             ',' + format_double(grid.relative[i * nt + j]) + '\n';
    }
  }
  return out;
}

ResultCache::ResultCache(fs::path dir, std::uint64_t config_hash, std::uint64_t seed,
                         double tolerance)
    : dir_(std::move(dir)), hash_(config_hash), seed_(seed), tolerance_(tolerance) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  const fs::path lock = dir_ / ".lock";
  lock_fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) throw IoError("cannot open cache lock " + lock.string());
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    // Another writer holds the cache; wait for it rather than interleave.
    if (::flock(lock_fd_, LOCK_EX) != 0) {
      ::close(lock_fd_);
      throw IoError("cannot lock cache directory " + dir_.string());
    }
  }
}

ResultCache::~ResultCache() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

fs::path ResultCache::path_for(trial::StateKind kind, double alpha) const {
  return dir_ / (trial::to_string(kind) + "_" + hex64(std::bit_cast<std::uint64_t>(alpha)) + "_" +
                 hex64(hash_) + "_" + std::to_string(seed_) + ".json");
}

std::optional<opt::OptimizationResult> ResultCache::load(trial::StateKind kind,
                                                         double alpha) const {
  const fs::path p = path_for(kind, alpha);
  if (!fs::exists(p)) {
    ++misses_;
    return std::nullopt;
  }
  try {
    const json j = json::parse(read_file(p));
    if (j.at("version").get<std::string>() != kVersion ||
        j.at("config_hash").get<std::string>() != hex64(hash_) ||
        j.at("seed").get<std::uint64_t>() != seed_) {
      ++misses_;
      return std::nullopt;
    }
    opt::OptimizationResult r = result_from_json(j.at("result"));
    if (r.kind != kind || r.alpha != alpha) {
      ++misses_;
      return std::nullopt;
    }
    const trial::TrialParams* g = r.ground_params ? &*r.ground_params : nullptr;
    const double e = opt::evaluate_point(kind, alpha, r.best_params, g, tolerance_).total;
    if (!(std::abs(e - r.best_energy.total) <= 1e-9 * std::abs(r.best_energy.total))) {
      ++misses_;
      return std::nullopt;
    }
    ++hits_;
    return r;
  } catch (const std::exception&) {
    // Corrupt or stale entries are recomputed.
    ++misses_;
    return std::nullopt;
  }
}

void ResultCache::store(const opt::OptimizationResult& result) const {
  json j;
  j["version"] = kVersion;
  j["config_hash"] = hex64(hash_);
  j["seed"] = seed_;
  j["result"] = to_json(result);
  write_file(path_for(result.kind, result.alpha), j.dump(2) + "\n");
}

Manifest::Manifest(fs::path root, const RunConfig& config, std::string command)
    : root_(std::move(root)),
      config_(config.to_json()),
      config_hash_(config.hash()),
      command_(std::move(command)),
      started_(utc_now()),
      start_seconds_(monotonic_seconds()) {}

void Manifest::produced(const fs::path& file) {
  produced_.push_back(fs::relative(file, root_).generic_string());
}

void Manifest::note(const std::string& key, json value) { notes_[key] = std::move(value); }

void Manifest::write() {
  const fs::path path = root_ / kFileName;
  json previous;
  if (fs::exists(path)) {
    try {
      previous = json::parse(read_file(path));
    } catch (const std::exception&) {
      previous = json();
    }
  }
  std::map<std::string, std::string> provenance;
  if (previous.is_object() && previous.contains("files"))
    for (const auto& f : previous["files"])
      if (f.contains("path") && f.contains("command"))
        provenance[f["path"].get<std::string>()] = f["command"].get<std::string>();
  for (const auto& p : produced_) provenance[p] = command_;

  std::vector<fs::path> files;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root_, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    const std::string rel = fs::relative(it->path(), root_).generic_string();
    if (rel == kFileName || rel.find(".tmp.") != std::string::npos) continue;
    files.push_back(it->path());
  }
  if (ec) throw IoError("cannot scan run directory " + root_.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  json listing = json::array();
  for (const auto& f : files) {
    const std::string rel = fs::relative(f, root_).generic_string();
    const std::string bytes = read_file(f);
    const auto prov = provenance.find(rel);
    listing.push_back({{"path", rel},
                       {"bytes", bytes.size()},
                       {"sha256", sha256_hex(bytes)},
                       {"command", prov == provenance.end() ? "unknown" : prov->second}});
  }

  json history = json::array();
  if (previous.is_object() && previous.contains("history") && previous["history"].is_array())
    history = previous["history"];
  history.push_back({{"command", command_},
                     {"started", started_},
                     {"finished", utc_now()},
                     {"seconds", monotonic_seconds() - start_seconds_},
                     {"config", config_},
                     {"config_hash", hex64(config_hash_)},
                     {"notes", notes_}});

  json m;
  m["tool"] = "wedgeqm";
  m["version"] = kVersion;
  m["config"] = config_;
  m["config_hash"] = hex64(config_hash_);
  m["history"] = history;
  m["files"] = listing;
  write_file(path, m.dump(2) + "\n");
}

}  // namespace wedge::io
