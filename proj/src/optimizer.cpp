#include "wedge/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "wedge/parallel.hpp"

namespace wedge::opt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Fnv1a {
 public:
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xffu;
      h_ *= 0x100000001b3ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

double safe(const Objective& f, std::span<const double> x) {
  try {
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
  } catch (const std::exception&) {
    // Non-normalizable or otherwise infeasible probes push the simplex back.
    return kInf;
  }
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iterations < 1 || restarts < 1) throw DomainError("optimizer counts must be positive");
  if (!(simplex_size_tolerance > 0.0) || !(objective_spread_tolerance > 0.0) ||
      !(search_tolerance > 0.0) || !(final_tolerance > 0.0))
    throw DomainError("optimizer tolerances must be positive");
  for (const auto& g : initial_guesses) g.validate();
}

std::uint64_t OptimizerConfig::hash() const {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(max_iterations));
  h.add(simplex_size_tolerance);
  h.add(objective_spread_tolerance);
  h.add(static_cast<std::uint64_t>(restarts));
  h.add(seed);
  h.add(search_tolerance);
  h.add(final_tolerance);
  for (const auto& g : initial_guesses) {
    h.add(g.m);
    h.add(g.n);
    h.add(g.p);
    h.add(g.q);
  }
  return h.value();
}

SimplexResult nelder_mead(const Objective& objective, std::vector<double> start,
                          const std::vector<double>& step, const OptimizerConfig& config) {
  const std::size_t dim = start.size();
  if (dim == 0 || step.size() != dim) throw DomainError("simplex dimension mismatch");

  SimplexResult out;
  std::vector<std::vector<double>> x(dim + 1, start);
  std::vector<double> fx(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) x[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= dim; ++i) fx[i] = safe(objective, x[i]);
  out.evaluations = static_cast<int>(dim + 1);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
  auto eval = [&](const std::vector<double>& p) {
    ++out.evaluations;
    return safe(objective, p);
  };
  auto along = [&](std::vector<double>& dst, double t, const std::vector<double>& worst) {
    for (std::size_t i = 0; i < dim; ++i) dst[i] = centroid[i] + t * (centroid[i] - worst[i]);
  };

  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    {
      std::vector<std::vector<double>> xs(dim + 1);
      std::vector<double> fs(dim + 1);
      for (std::size_t i = 0; i <= dim; ++i) {
        xs[i] = std::move(x[order[i]]);
        fs[i] = fx[order[i]];
      }
      x.swap(xs);
      fx.swap(fs);
    }

    double diameter = 0.0;
    for (std::size_t i = 1; i <= dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) diameter = std::max(diameter, std::abs(x[i][j] - x[0][j]));
    const double spread = fx[dim] - fx[0];
    if (std::isfinite(fx[0]) &&
        (diameter < config.simplex_size_tolerance ||
         (std::isfinite(spread) && spread < config.objective_spread_tolerance))) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += x[i][j] / static_cast<double>(dim);

    const auto& worst = x[dim];
    along(xr, 1.0, worst);
    const double fr = eval(xr);
    if (fr < fx[0]) {
      along(xe, 2.0, worst);
      const double fe = eval(xe);
      if (fe < fr) {
        x[dim] = xe;
        fx[dim] = fe;
      } else {
        x[dim] = xr;
        fx[dim] = fr;
      }
      continue;
    }
    if (fr < fx[dim - 1]) {
      x[dim] = xr;
      fx[dim] = fr;
      continue;
    }
    if (fr < fx[dim]) {
      along(xc, 0.5, worst);  // outside contraction
      const double fc = eval(xc);
      if (fc <= fr) {
        x[dim] = xc;
        fx[dim] = fc;
        continue;
      }
    } else {
      along(xc, -0.5, worst);  // inside contraction
      const double fc = eval(xc);
      if (fc < fx[dim]) {
        x[dim] = xc;
        fx[dim] = fc;
        continue;
      }
    }
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) x[i][j] = x[0][j] + 0.5 * (x[i][j] - x[0][j]);
      fx[i] = eval(x[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  out.point = x[best];
  out.value = fx[best];
  out.iterations = iter;
  return out;
}

namespace {

// Repeats Nelder-Mead from its own optimum with a fresh simplex until a cycle
// stops improving; a collapsed simplex is the usual way Nelder-Mead stalls.
SimplexResult polished_run(const Objective& objective, const std::vector<double>& start,
                           const OptimizerConfig& config, double step_size) {
  std::vector<double> step(start.size(), step_size);
  SimplexResult best = nelder_mead(objective, start, step, config);
  int total = best.iterations;
  for (int cycle = 0; cycle < 3 && std::isfinite(best.value); ++cycle) {
    std::vector<double> small(start.size(), 0.25 * step_size);
    SimplexResult next = nelder_mead(objective, best.point, small, config);
    total += next.iterations;
    const bool improved = next.value < best.value - config.objective_spread_tolerance;
    if (next.value < best.value) best = next;
    if (!improved) break;
  }
  best.iterations = total;
  return best;
}

}  // namespace

MinimizeResult minimize(const Objective& objective, int dimension, const OptimizerConfig& config,
                        std::vector<std::vector<double>> starts) {
  config.validate();
  if (dimension < 1) throw DomainError("dimension must be >= 1");
  if (starts.empty()) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int r = 0; r < config.restarts; ++r) {
      std::vector<double> s(dimension);
      for (auto& v : s) v = uni(rng);
      starts.push_back(std::move(s));
    }
  }
  const int n = static_cast<int>(starts.size());
  std::vector<SimplexResult> runs(n);
  for_each_index(n, config.execution,
                 [&](int i) { runs[i] = polished_run(objective, starts[i], config, 0.5); });

  MinimizeResult out;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    out.restart_values.push_back(runs[i].value);
    out.iterations += runs[i].iterations;
    if (std::isfinite(runs[i].value) && (best < 0 || runs[i].value < runs[best].value)) best = i;
  }
  if (best < 0) throw OptimizationError("every restart produced a non-finite objective");
  out.best_point = runs[best].point;
  out.best_value = runs[best].value;
  out.converged = runs[best].converged;
  return out;
}

std::array<double, 4> transform(const TrialParams& params) {
  params.validate();
  const double p = std::min(params.p, kPUpper);
  return {std::log(params.m), std::log(params.n), std::log(p / (1.0 - p)),
          params.q > 0.0 ? std::log(params.q) : kZeroLog};
}

TrialParams untransform(std::span<const double> u) {
  if (u.size() != 4) throw DomainError("transformed parameter vector must have 4 entries");
  TrialParams p;
  p.m = std::exp(u[0]);
  p.n = std::exp(u[1]);
  p.p = std::min(logistic(u[2]), kPUpper);
  p.q = u[3] <= kZeroLog ? 0.0 : std::exp(u[3]);
  return p;
}

bool feasible(const TrialParams& params) {
  return params.m <= kMaxM && params.wall_decay() >= kMinWallRatio * params.n;
}

std::array<bool, 4> boundary_flags(const TrialParams& params) {
  constexpr double eps = 1e-6;
  const bool wall_floor = params.wall_decay() <= kMinWallRatio * params.n * (1.0 + eps);
  return {params.m <= eps || params.m >= kMaxM * (1.0 - eps), params.n <= eps,
          params.p <= eps || params.p >= 1.0 - eps || wall_floor, params.q <= eps};
}

std::vector<TrialParams> starting_points(double alpha, const OptimizerConfig& config) {
  const double s = std::numbers::pi / alpha;
  std::vector<TrialParams> pts;
  pts.push_back({1.0, 0.25 * s, std::min(0.99, 0.99 * s), 0.01});
  for (const auto& g : config.initial_guesses) pts.push_back(g);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + uni(rng) * (std::log(hi) - std::log(lo)));
  };
  while (static_cast<int>(pts.size()) < config.restarts) {
    TrialParams t;
    t.m = log_uniform(0.3, 3.0);
    t.n = log_uniform(0.02, 1.0);
    t.p = std::min(log_uniform(0.2, 1.0), 0.99);
    t.q = log_uniform(1e-3, 0.5);
    pts.push_back(t);
  }
  return pts;
}

trial::SeparableState build_state(StateKind kind, double alpha, const TrialParams& params,
                                  const TrialParams* ground_params, double tolerance) {
  numerics::QuadratureSpec spec;
  spec.relative_tolerance = tolerance;
  spec.absolute_tolerance = 1e-300;
  spec.max_subdivisions = 2000;
  switch (kind) {
    case StateKind::ground: return trial::SeparableState::ground(params, alpha, spec);
    case StateKind::antisymmetric: return trial::SeparableState::antisymmetric(params, alpha, spec);
    case StateKind::excited:
      if (ground_params == nullptr) throw DomainError("excited state needs ground parameters");
      return trial::SeparableState::excited(params, *ground_params, alpha, spec);
  }
  throw DomainError("unknown state kind");
}

EnergyBreakdown evaluate_point(StateKind kind, double alpha, const TrialParams& params,
                               const TrialParams* ground_params, double tolerance) {
  const auto state = build_state(kind, alpha, params, ground_params, tolerance);
  numerics::QuadratureSpec spec;
  spec.relative_tolerance = tolerance;
  spec.absolute_tolerance = 1e-300;
  spec.max_subdivisions = 2000;
  return energy::expectation_reduced(state, spec);
}

OptimizationResult optimize_state(StateKind kind, double alpha, const OptimizerConfig& config,
                                  const OptimizationResult* ground) {
  config.validate();
  WedgeGeometry{alpha};
  const TrialParams* ground_params = nullptr;
  if (kind == StateKind::excited) {
    if (ground == nullptr || ground->kind != StateKind::ground)
      throw DomainError("optimizing the excited state requires the ground-state result");
    if (ground->alpha != alpha) throw DomainError("ground result is for a different α");
    ground_params = &ground->best_params;
  }

  auto objective = [&](std::span<const double> u) {
    const TrialParams prm = untransform(u);
    if (!feasible(prm)) return kInf;
    return evaluate_point(kind, alpha, prm, ground_params, config.search_tolerance).total;
  };

  const auto starts = starting_points(alpha, config);
  const int n = static_cast<int>(starts.size());
  struct Run {
    TrialParams params;
    EnergyBreakdown energy;
    int iterations = 0;
    bool converged = false;
  };
  std::vector<Run> runs(n);

  for_each_index(n, config.execution, [&](int i) {
    const auto u0 = transform(starts[i]);
    const SimplexResult sr =
        polished_run(objective, std::vector<double>(u0.begin(), u0.end()), config, 0.3);
    Run run;
    run.iterations = sr.iterations;
    run.converged = sr.converged;
    if (!std::isfinite(sr.value)) {
      run.energy.total = kInf;
      runs[i] = run;
      return;
    }
    TrialParams best = untransform(sr.point);

    // Explicit q = 0 probe: reachable only as a limit through e^{u₄}.
    if (best.q > 0.0 && best.p < 1.0) {
      TrialParams probe = best;
      probe.q = 0.0;
      const double e0 = safe(objective, transform(probe));
      if (e0 < safe(objective, transform(best))) best = probe;
    }

    EnergyBreakdown e;
    try {
      e = evaluate_point(kind, alpha, best, ground_params, config.final_tolerance);
    } catch (const std::exception&) {
      run.energy.total = kInf;
      runs[i] = run;
      return;
    }
    // Scaling (n, q) → λ(n, q) maps (T, V) → (λ²T, λV); λ = -V/2T is the exact
    // minimum along that ray. For the excited state the ray also moves `a`, so
    // the step is only kept when it lowers the energy.
    if (e.kinetic > 0.0 && e.potential < 0.0) {
      const double lambda = -e.potential / (2.0 * e.kinetic);
      TrialParams scaled = best;
      scaled.n *= lambda;
      scaled.q *= lambda;
      try {
        if (feasible(scaled)) {
          const EnergyBreakdown es =
              evaluate_point(kind, alpha, scaled, ground_params, config.final_tolerance);
          if (es.total <= e.total) {
            best = scaled;
            e = es;
          }
        }
      } catch (const std::exception&) {
        // keep the unscaled point
      }
    }
    run.params = best;
    run.energy = e;
    runs[i] = run;
  });

  OptimizationResult out;
  out.kind = kind;
  out.alpha = alpha;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    out.restart_energies.push_back(runs[i].energy.total);
    out.iterations += runs[i].iterations;
    if (std::isfinite(runs[i].energy.total) &&
        (best < 0 || runs[i].energy.total < runs[best].energy.total))
      best = i;
  }
  if (best < 0) {
    std::ostringstream os;
    os << "optimization of the " << trial::to_string(kind) << " state at α = " << alpha
       << " failed: every restart produced a non-finite energy";
    throw OptimizationError(os.str());
  }
  out.best_params = runs[best].params;
  out.best_energy = runs[best].energy;
  out.converged = runs[best].converged;
  out.boundary_active = boundary_flags(out.best_params);
  if (kind == StateKind::excited) {
    out.ground_params = *ground_params;
    out.orthogonality_a =
        build_state(kind, alpha, out.best_params, ground_params, config.final_tolerance)
            .orthogonality_a();
  }
  return out;
}

}  // namespace wedge::opt
