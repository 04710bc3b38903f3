#include <unistd.h>

#include <cstdlib>
#include <set>
#include <sstream>

#include "doctest.h"
#include "wedge/cli.hpp"
#include "wedge/io.hpp"

using namespace wedge;
using namespace wedge::io;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("wedgeqm-unit-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

int data_rows(const std::string& csv) {
  int n = 0;
  std::istringstream in(csv);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("alpha specs") {
  const auto a = parse_alpha_spec("1.0:6.2:0.4");
  CHECK(a.size() == 14u);
  CHECK(a.front() == 1.0);
  CHECK(a.back() == doctest::Approx(6.2));
  CHECK(parse_alpha_spec("2.0,3.5,5.0") == std::vector<double>{2.0, 3.5, 5.0});
  CHECK(parse_alpha_spec("3.14159265").size() == 1u);
  CHECK_THROWS_AS(parse_alpha_spec(""), UsageError);
  CHECK_THROWS_AS(parse_alpha_spec("1:2"), UsageError);
  CHECK_THROWS_AS(parse_alpha_spec("1:2:0"), UsageError);
  CHECK_THROWS_AS(parse_alpha_spec("7.0"), UsageError);
  CHECK_THROWS_AS(parse_alpha_spec("abc"), UsageError);
  CHECK_THROWS_AS(parse_alpha_spec("2x"), UsageError);
}

TEST_CASE("grid specs") {
  const auto g = parse_grid_spec("64:32:40");
  CHECK(g.radial_count == 64);
  CHECK(g.angular_count == 32);
  CHECK(g.r_max == 40.0);
  CHECK_THROWS_AS(parse_grid_spec(""), UsageError);
  CHECK_THROWS_AS(parse_grid_spec("64:64"), UsageError);
  CHECK_THROWS_AS(parse_grid_spec("64:2.5:40"), UsageError);
  CHECK_THROWS_AS(parse_grid_spec("64:64:-1"), UsageError);
}

TEST_CASE("unit round trip") {
  for (double e : {-0.03125, -1.2345e-3, 0.7}) {
    CHECK(std::abs(to_units(e, Units::ev) - e * 27.211386) <= 1e-10 * std::abs(e * 27.211386));
    CHECK(to_units(e, Units::au) == e);
  }
  CHECK(parse_units("au") == Units::au);
  CHECK_THROWS_AS(parse_units("kcal"), UsageError);
}

TEST_CASE("number formatting is round-trip exact") {
  for (double x : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324}) CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("SHA-256 test vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("optimization result JSON round trip") {
  opt::OptimizationResult r;
  r.kind = trial::StateKind::excited;
  r.alpha = 2.0;
  r.best_params = {1.1, 0.3, 0.7, 0.0};
  r.best_energy = energy::EnergyBreakdown::from_parts(0.1, -0.3);
  r.orthogonality_a = 4.2;
  r.ground_params = trial::TrialParams{1.0, 0.2, 0.6, 0.01};
  r.boundary_active = {false, false, true, true};
  r.restart_energies = {-0.2, std::numeric_limits<double>::infinity()};
  const auto back = result_from_json(json::parse(to_json(r).dump()));
  CHECK(back.kind == r.kind);
  CHECK(back.best_params == r.best_params);
  CHECK(back.best_energy.total == r.best_energy.total);
  CHECK(*back.ground_params == *r.ground_params);
  CHECK(back.boundary_active == r.boundary_active);
  CHECK(std::isinf(back.restart_energies[1]));
}

TEST_CASE("sweep CSV layout") {
  degeneracy::SweepRecord ok;
  ok.alpha = 2.0;
  ok.ok = true;
  ok.status = "ok";
  ok.energy = {-0.033, -0.03125, -0.009};
  degeneracy::SweepRecord bad;
  bad.alpha = 3.0;
  bad.status = "quadrature failed, twice";
  const auto csv = sweep_csv({ok, bad}, Units::ev);
  CHECK(csv.rfind("alpha_rad,E0_eV,E1_eV,E2_eV,gap01_eV,gap02_eV,splitting_eV,", 0) == 0);
  CHECK(data_rows(csv) == 2);
  CHECK(csv.find("\"quadrature failed, twice\"") != std::string::npos);
  CHECK(csv.find("3,nan,nan") != std::string::npos);
}

TEST_CASE("cli: usage and i/o exit codes") {
  TempDir t("codes");
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"potential", "--alpha", "1", "--grid", "", "--out", t.path.string()}).code ==
        cli::kExitUsage);
  CHECK(invoke({"potential", "--out", t.path.string()}).code == cli::kExitUsage);
  CHECK(invoke({"potential", "--alpha", "1", "--alphas", "1,2", "--out", t.path.string()}).code ==
        cli::kExitUsage);
  CHECK(invoke({"minimize", "--alpha", "2", "--state", "3", "--out", t.path.string()}).code ==
        cli::kExitUsage);
  CHECK(invoke({"bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"potential", "--alpha", "1", "--out", "/proc/wedgeqm-denied"}).code == cli::kExitIo);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
}

TEST_CASE("cli: potential grid and manifest completeness") {
  TempDir t("potential");
  const auto r = invoke({"potential", "--alpha", "0.9424778", "--grid", "64:64:40", "--out",
                      t.path.string()});
  REQUIRE(r.code == 0);
  const auto csv = read_file(t.path / "potential/alpha_0.942478.csv");
  CHECK(data_rows(csv) == 64 * 64);
  CHECK(csv.find("r,theta,x,y,e_phi,inside") != std::string::npos);
  const json m = json::parse(read_file(t.path / Manifest::kFileName));
  std::set<std::string> listed;
  for (const auto& f : m["files"]) {
    listed.insert(f["path"].get<std::string>());
    CHECK(f["sha256"] == sha256_hex(read_file(t.path / f["path"].get<std::string>())));
    CHECK(f["command"] == "potential");
  }
  for (const auto& e : fs::recursive_directory_iterator(t.path))
    if (e.is_regular_file() && e.path().filename() != Manifest::kFileName)
      CHECK(listed.count(fs::relative(e.path(), t.path).generic_string()) == 1);
  CHECK(m["config"]["grid"] == "64:64:40");
  CHECK(m["config_hash"].get<std::string>().size() == 16u);
}

TEST_CASE("cli: minimize caches, excited pulls in its ground state") {
  TempDir t("minimize");
  const std::string out = t.path.string();
  auto r1 = invoke({"minimize", "--alpha", "2.0", "--state", "2", "--restarts", "3", "--out", out});
  REQUIRE(r1.code == 0);
  CHECK(r1.out.find(" eV") != std::string::npos);
  CHECK(r1.out.find(" Ha") != std::string::npos);
  int ground_entries = 0;
  for (const auto& e : fs::directory_iterator(t.path / "cache"))
    if (e.path().filename().string().rfind("ground_", 0) == 0) ++ground_entries;
  CHECK(ground_entries == 1);
  const auto first = read_file(t.path / "minimize/excited_alpha_2.000000.json");
  auto r2 = invoke({"minimize", "--alpha", "2.0", "--state", "2", "--restarts", "3", "--out", out});
  REQUIRE(r2.code == 0);
  CHECK(read_file(t.path / "minimize/excited_alpha_2.000000.json") == first);
  const json m = json::parse(read_file(t.path / Manifest::kFileName));
  CHECK(m["history"].size() == 2u);
  CHECK(m["history"][1]["notes"]["cache"]["hits"] == 1);
  // A changed tolerance must not reuse the entry.
  auto r3 = invoke({"minimize", "--alpha", "2.0", "--state", "0", "--restarts", "3", "--tol-quad",
                 "1e-11", "--out", out});
  REQUIRE(r3.code == 0);
  const json m3 = json::parse(read_file(t.path / Manifest::kFileName));
  CHECK(m3["history"][2]["notes"]["cache"]["misses"] == 1);
}

TEST_CASE("cli: config file, flag override and output environment variable") {
  TempDir t("config");
  fs::create_directories(t.path);
  write_file(t.path / "run.ini", "grid=8:8:10\nalphas=1.0,2.0\nunits=au\n");
  const fs::path env_out = t.path / "from-env";
  ::setenv(cli::kOutputEnv, env_out.c_str(), 1);
  auto r = invoke({"potential", "--config", (t.path / "run.ini").string(), "--grid", "6:6:10"});
  ::unsetenv(cli::kOutputEnv);
  REQUIRE(r.code == 0);
  const auto csv = read_file(env_out / "potential/alpha_2.000000.csv");
  CHECK(data_rows(csv) == 36);
  CHECK(csv.find("e_phi in Ha") != std::string::npos);
  CHECK(fs::exists(env_out / "potential/alpha_1.000000.json"));
}

TEST_CASE("cli: limits-check passes, and fails under the fault hook") {
  TempDir t("limits");
  auto ok = invoke({"limits-check", "--out", t.path.string()});
  CHECK(ok.code == cli::kExitOk);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  auto bad = invoke({"limits-check", "--inject-fault", "--out", t.path.string()});
  CHECK(bad.code == cli::kExitCheck);
  CHECK(bad.err.find("k(pi) = 0") != std::string::npos);
}

TEST_CASE("density grid of a compact state integrates to about one") {
  const auto s = trial::SeparableState::ground({1.0, 0.4, 0.7, 0.1}, 2.0);
  potential::GridRequest g;
  g.r_max = 60.0;
  g.radial_count = 200;
  g.angular_count = 100;
  const auto d = density_grid(s, g);
  CHECK(d.integral == doctest::Approx(1.0).epsilon(2e-3));
  double peak = 0.0;
  for (double v : d.relative) peak = std::max(peak, v);
  CHECK(peak == 1.0);
  CHECK(data_rows(density_csv(d)) == 200 * 100);
}

TEST_CASE("density grid: serial reference and parallel path agree exactly") {
  const auto s = trial::SeparableState::ground({1.3, 0.2, 0.8, 0.05}, 4.5);
  potential::GridRequest g;
  g.radial_count = 40;
  g.angular_count = 30;
  const auto a = density_grid(s, g, Execution::serial);
  const auto b = density_grid(s, g, Execution::parallel);
  CHECK(density_csv(a) == density_csv(b));
  CHECK(a.integral == b.integral);
}
