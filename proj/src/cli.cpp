#include "wedge/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "wedge/checks.hpp"
#include "wedge/degeneracy.hpp"
#include "wedge/io.hpp"
#include "wedge/parallel.hpp"

namespace wedge::cli {

namespace {

using io::json;
using trial::StateKind;
namespace fs = std::filesystem;

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", alpha);
  return buf;
}

struct Context {
  io::RunConfig config;
  std::ostream& out;
  std::ostream& err;
  io::Manifest manifest;

  fs::path emit(const fs::path& relative, const std::string& content) {
    const fs::path p = config.out_dir / relative;
    io::write_file(p, content);
    manifest.produced(p);
    return p;
  }
};

std::vector<double> require_alphas(const Context& ctx) {
  if (ctx.config.alphas.empty()) throw io::UsageError("this command needs --alpha or --alphas");
  return ctx.config.alphas;
}

// Cached optimum; the excited state pulls in its ground state first.
opt::OptimizationResult obtain(const io::ResultCache& cache, StateKind kind, double alpha,
                               const opt::OptimizerConfig& config) {
  if (auto hit = cache.load(kind, alpha)) return *hit;
  opt::OptimizationResult r;
  if (kind == StateKind::excited) {
    const auto ground = obtain(cache, StateKind::ground, alpha, config);
    r = opt::optimize_state(kind, alpha, config, &ground);
  } else {
    r = opt::optimize_state(kind, alpha, config);
  }
  cache.store(r);
  return r;
}

io::ResultCache open_cache(const Context& ctx) {
  return io::ResultCache(ctx.config.out_dir / "cache", ctx.config.hash(), ctx.config.seed,
                         ctx.config.quad_tolerance);
}

int cmd_potential(Context& ctx) {
  auto spec = potential::kernel_spec();
  spec.relative_tolerance = ctx.config.quad_tolerance;
  for (double alpha : require_alphas(ctx)) {
    const auto grid =
        potential::potential_grid(WedgeGeometry(alpha), ctx.config.grid, Execution::parallel, spec);
    const std::string stem = "potential/alpha_" + alpha_tag(alpha);
    ctx.emit(stem + ".csv", io::field_grid_csv(grid, ctx.config.units));
    ctx.emit(stem + ".json", io::field_grid_json(grid, ctx.config.units).dump(1) + "\n");
    ctx.out << "potential grid at alpha = " << alpha_tag(alpha) << " written to " << stem
            << ".{csv,json}\n";
  }
  return kExitOk;
}

int cmd_minimize(Context& ctx) {
  const auto kind = trial::state_kind_from_index(ctx.config.state);
  const auto config = ctx.config.optimizer();
  const auto cache = open_cache(ctx);
  for (double alpha : require_alphas(ctx)) {
    const auto r = obtain(cache, kind, alpha, config);
    const trial::TrialParams* g = r.ground_params ? &*r.ground_params : nullptr;
    const auto state = opt::build_state(kind, alpha, r.best_params, g, ctx.config.quad_tolerance);
    json j;
    j["result"] = io::to_json(r);
    j["state"] = io::state_json(state);
    const std::string stem = "minimize/" + trial::to_string(kind) + "_alpha_" + alpha_tag(alpha);
    ctx.emit(stem + ".json", j.dump(2) + "\n");
    const std::string summary = io::summary_text(r);
    ctx.emit(stem + ".txt", summary);
    ctx.out << summary;
  }
  ctx.manifest.note("cache", {{"hits", cache.hits()}, {"misses", cache.misses()}});
  return kExitOk;
}

int cmd_sweep(Context& ctx) {
  const auto alphas = require_alphas(ctx);
  // Parallel over α, serial restarts inside, as in degeneracy::sweep.
  const auto config = ctx.config.optimizer(Execution::serial);
  const auto cache = open_cache(ctx);
  const int n = static_cast<int>(alphas.size());
  std::vector<degeneracy::SweepRecord> records(n);
  const Execution outer = n > 1 ? Execution::parallel : Execution::serial;
  for_each_index(n, outer, [&](int i) {
    const double alpha = alphas[i];
    try {
      const auto g = obtain(cache, StateKind::ground, alpha, config);
      const auto a = obtain(cache, StateKind::antisymmetric, alpha, config);
      const auto e = obtain(cache, StateKind::excited, alpha, config);
      records[i] = degeneracy::assemble_record(alpha, g, a, e);
    } catch (const std::exception& ex) {
      records[i] = degeneracy::SweepRecord{};
      records[i].alpha = alpha;
      records[i].status = ex.what();
    }
  });
  const int ok = static_cast<int>(std::count_if(records.begin(), records.end(),
                                                [](const auto& r) { return r.ok; }));
  ctx.emit("sweep.csv", io::sweep_csv(records, ctx.config.units));
  ctx.manifest.note("cache", {{"hits", cache.hits()}, {"misses", cache.misses()}});
  ctx.manifest.note("rows", {{"total", n}, {"ok", ok}});
  degeneracy::check_ordering(records);
  ctx.out << "sweep: " << ok << " of " << n << " rows succeeded, written to sweep.csv\n";
  for (const auto& r : records)
    if (!r.ok) ctx.err << "alpha = " << alpha_tag(r.alpha) << " failed: " << r.status << "\n";
  return ok > 0 ? kExitOk : kExitComputation;
}

int cmd_density(Context& ctx) {
  const auto kind = trial::state_kind_from_index(ctx.config.state);
  const auto config = ctx.config.optimizer();
  const auto cache = open_cache(ctx);
  json integrals = json::object();
  for (double alpha : require_alphas(ctx)) {
    const auto r = obtain(cache, kind, alpha, config);
    const trial::TrialParams* g = r.ground_params ? &*r.ground_params : nullptr;
    const auto state = opt::build_state(kind, alpha, r.best_params, g, ctx.config.quad_tolerance);
    const auto d = io::density_grid(state, ctx.config.grid);
    const std::string file =
        "density/" + trial::to_string(kind) + "_alpha_" + alpha_tag(alpha) + ".csv";
    ctx.emit(file, io::density_csv(d));
    integrals[file] = d.integral;
    ctx.out << "density of " << trial::to_string(kind) << " at alpha = " << alpha_tag(alpha)
            << ": grid integral " << io::format_double(d.integral) << ", written to " << file
            << "\n";
  }
  ctx.manifest.note("density_grid_integral", integrals);
  ctx.manifest.note("cache", {{"hits", cache.hits()}, {"misses", cache.misses()}});
  return kExitOk;
}

int cmd_splitting(Context& ctx) {
  const auto config = ctx.config.optimizer();
  const auto cache = open_cache(ctx);
  // Same spec as the sweep records, so both report identical splittings.
  const numerics::QuadratureSpec spec;
  for (double alpha : require_alphas(ctx)) {
    const auto g = obtain(cache, StateKind::ground, alpha, config);
    const auto a = obtain(cache, StateKind::antisymmetric, alpha, config);
    const auto well = degeneracy::single_well_from_pair(g, a, ctx.config.quad_tolerance);
    const auto split = degeneracy::bisector_splitting(well, spec);
    const auto s0 = opt::build_state(StateKind::ground, alpha, g.best_params, nullptr,
                                     ctx.config.quad_tolerance);
    const degeneracy::PolarGrid pg{ctx.config.grid.radial_count, ctx.config.grid.angular_count,
                                   ctx.config.grid.r_max};
    const double e_l = 0.5 * (g.best_energy.total + a.best_energy.total);
    const auto cr = degeneracy::current_residual(
        well, degeneracy::field_of(s0, well.log_scale), e_l, g.best_energy.total, pg);

    json j;
    j["alpha"] = alpha;
    j["E0_au"] = g.best_energy.total;
    j["E1_au"] = a.best_energy.total;
    j["gap01_" + io::energy_suffix(ctx.config.units)] =
        io::to_units(a.best_energy.total - g.best_energy.total, ctx.config.units);
    j["splitting_" + io::energy_suffix(ctx.config.units)] =
        io::to_units(split.value, ctx.config.units);
    j["splitting_log10_au"] = std::isfinite(split.log10_abs) ? json(split.log10_abs) : json(nullptr);
    j["upper_mass"] = well.upper_mass;
    j["lower_mass"] = well.lower_mass;
    j["current_residual"] = {{"grid", ctx.config.grid_spec},
                             {"integrated_residual", cr.integrated_residual},
                             {"volume_divergence", cr.volume_divergence},
                             {"line_term", cr.line_term},
                             {"outer_flux", cr.outer_flux},
                             {"log_scale", cr.log_scale}};
    const std::string file = "splitting/alpha_" + alpha_tag(alpha) + ".json";
    ctx.emit(file, j.dump(2) + "\n");
    ctx.out << "alpha = " << alpha_tag(alpha) << ": splitting log10|dE| = " << split.log10_abs
            << " (a.u.), E1 - E0 = " << io::format_double(a.best_energy.total - g.best_energy.total)
            << " Ha, channel masses " << well.upper_mass << " / " << well.lower_mass << "\n";
  }
  ctx.manifest.note("cache", {{"hits", cache.hits()}, {"misses", cache.misses()}});
  return kExitOk;
}

int cmd_limits_check(Context& ctx, bool inject_fault) {
  checks::CheckOptions o;
  o.quad_tolerance = ctx.config.quad_tolerance;
  o.seed = ctx.config.seed;
  o.inject_fault = inject_fault;
  const auto results = checks::limits_check(o);
  json rows = json::array();
  int failed = 0;
  char line[256];
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-4s %-48s %12.3e <= %9.1e\n", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.measured, r.tolerance);
    ctx.out << line;
    if (!r.pass) {
      ++failed;
      ctx.err << "check failed: " << r.name << ": measured " << io::format_double(r.measured)
              << ", tolerance " << io::format_double(r.tolerance)
              << (r.detail.empty() ? "" : " (" + r.detail + ")") << "\n";
    }
    rows.push_back({{"name", r.name},
                    {"measured", std::isfinite(r.measured) ? json(r.measured) : json(nullptr)},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass},
                    {"detail", r.detail}});
  }
  json j;
  j["checks"] = rows;
  j["failed"] = failed;
  ctx.emit("limits_check.json", j.dump(2) + "\n");
  ctx.out << (failed ? std::to_string(failed) + " check(s) failed\n" : "all checks passed\n");
  return failed ? kExitCheck : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational bound states of a charge in its own image potential at a wedge.",
               "wedgeqm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a key=value file (flags override it)");

  io::RunConfig cfg;
  std::string units = "ev";
  std::string out_dir;
  std::string alpha_one;
  std::string alphas;
  app.add_option("--out", out_dir, "Output directory (default $WEDGEQM_OUT or ./wedgeqm-out)");
  app.add_option("--units", units, "Energy units of emitted tables: ev or au")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed for optimizer restarts")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "Optimizer restarts per state")->capture_default_str();
  app.add_option("--tol-quad", cfg.quad_tolerance,
                 "Relative quadrature tolerance of final and reported integrals")
      ->capture_default_str();
  app.add_option("--tol-opt", cfg.opt_tolerance, "Simplex objective spread tolerance (Ha)")
      ->capture_default_str();
  app.add_option("--grid", cfg.grid_spec, "Grid nr:ntheta:rmax")->capture_default_str();
  app.add_option("--alphas", alphas, "Opening angles: start:stop:step or a comma list (rad)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--alpha", alpha_one, "One opening angle (rad)");
  app.add_option("--state", cfg.state, "0 ground, 1 antisymmetric, 2 excited")
      ->capture_default_str();

  auto* potential = app.add_subcommand("potential", "Image potential grids");
  auto* minimize = app.add_subcommand("minimize", "Optimize one state");
  auto* sweep = app.add_subcommand("sweep", "Three levels across a range of opening angles");
  auto* density = app.add_subcommand("density", "|psi|^2 grid of an optimized state");
  auto* splitting = app.add_subcommand("splitting", "Bisector estimate of the pair splitting");
  auto* limits = app.add_subcommand("limits-check", "Run the analytic limit battery");
  bool inject_fault = false;
  limits->add_flag("--inject-fault", inject_fault)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.units = io::parse_units(units);
    if (!alpha_one.empty() && !alphas.empty())
      throw io::UsageError("--alpha and --alphas are mutually exclusive");
    cfg.alpha_spec = !alpha_one.empty() ? alpha_one : alphas;
    if (!alpha_one.empty() && alpha_one.find_first_of(":,") != std::string::npos)
      throw io::UsageError("--alpha takes a single value");
    if (out_dir.empty()) {
      const char* env = std::getenv(kOutputEnv);
      out_dir = (env && *env) ? env : "wedgeqm-out";
    }
    cfg.out_dir = out_dir;
    cfg.validate();
  } catch (const io::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  Context ctx{cfg, out, err, io::Manifest(cfg.out_dir, cfg, chosen->get_name())};
  int code = kExitOk;
  try {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw io::IoError("cannot create output directory " + cfg.out_dir.string());
    try {
      if (chosen == potential) code = cmd_potential(ctx);
      else if (chosen == minimize) code = cmd_minimize(ctx);
      else if (chosen == sweep) code = cmd_sweep(ctx);
      else if (chosen == density) code = cmd_density(ctx);
      else if (chosen == splitting) code = cmd_splitting(ctx);
      else code = cmd_limits_check(ctx, inject_fault);
    } catch (const io::IoError&) {
      throw;
    } catch (const io::UsageError&) {
      throw;
    } catch (const fs::filesystem_error&) {
      throw;
    } catch (const std::exception& e) {
      // Record what was written before the failure.
      ctx.manifest.note("error", e.what());
      ctx.manifest.write();
      err << "computation failed: " << e.what() << "\n";
      return kExitComputation;
    }
    ctx.manifest.write();
  } catch (const io::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return code;
}

}  // namespace wedge::cli
