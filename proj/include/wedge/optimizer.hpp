#pragma once

// Nelder-Mead simplex minimization with seeded multi-start, and the
// per-state workflow that minimizes ⟨ψ|Ĥ|ψ⟩ over {m, n, p, q}.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wedge/energy.hpp"

namespace wedge::opt {

using energy::EnergyBreakdown;
using trial::StateKind;
using trial::TrialParams;

struct OptimizerConfig {
  int max_iterations = 5000;
  double simplex_size_tolerance = 1e-9;
  double objective_spread_tolerance = 1e-12;
  int restarts = 8;
  std::uint64_t seed = 20100601;
  std::vector<TrialParams> initial_guesses;
  // Quadrature tolerance inside the search and for the final re-evaluation.
  double search_tolerance = 1e-8;
  double final_tolerance = 1e-12;
  Execution execution = Execution::parallel;

  void validate() const;
  // Stable digest of every field that can change a result (execution excluded).
  std::uint64_t hash() const;
};

using Objective = std::function<double(std::span<const double>)>;

struct SimplexResult {
  std::vector<double> point;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Single Nelder-Mead run; coefficients 1 (reflection), 2 (expansion),
// 0.5 (contraction), 0.5 (shrink).
SimplexResult nelder_mead(const Objective& objective, std::vector<double> start,
                          const std::vector<double>& step, const OptimizerConfig& config);

struct MinimizeResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> restart_values;
};

// Multi-start minimization. Without explicit `starts`, start points are drawn
// uniformly from [-1, 1]^dimension with the configured seed. Throws
// OptimizationError when no restart reaches a finite value.
MinimizeResult minimize(const Objective& objective, int dimension, const OptimizerConfig& config,
                        std::vector<std::vector<double>> starts = {});

// Unconstrained coordinates: m = e^u₁, n = e^u₂, p = σ(u₃) (clipped at
// 1 - 1e-12), q = e^u₄. q = 0 maps to u₄ = kZeroLog.
inline constexpr double kPUpper = 1.0 - 1e-12;
inline constexpr double kZeroLog = -700.0;
std::array<double, 4> transform(const TrialParams& params);

// Search feasibility. Near γ_wall → 0 the wall states turn into the planar
// 1D limit; the energy there is flat to ~1e-9 eV once γ_wall < 1e-6·n, while
// cos(px) near the wall loses relative precision. m is a flat direction in
// that limit and is capped to keep the radial moments representable.
inline constexpr double kMinWallRatio = 1e-6;
inline constexpr double kMaxM = 60.0;
bool feasible(const TrialParams& params);
TrialParams untransform(std::span<const double> u);

struct OptimizationResult {
  StateKind kind = StateKind::ground;
  double alpha = 0.0;
  TrialParams best_params;
  EnergyBreakdown best_energy;
  double orthogonality_a = 0.0;  // excited only
  std::optional<TrialParams> ground_params;  // excited only
  int iterations = 0;
  bool converged = false;
  std::array<bool, 4> boundary_active{};  // m, n, p, q
  std::vector<double> restart_energies;
};

// Boundary proximity used for boundary_active, per parameter within 1e-6 of
// a constraint: m ∈ {0, kMaxM}, n = 0, p ∈ {0, 1} or the wall-decay floor,
// q = 0.
std::array<bool, 4> boundary_flags(const TrialParams& params);

// Starting points: the hydrogenic planar point adapted to α, any configured
// guesses, then log-uniform random draws.
std::vector<TrialParams> starting_points(double alpha, const OptimizerConfig& config);

// For kind == excited the ground optimum for the same α is required.
OptimizationResult optimize_state(StateKind kind, double alpha, const OptimizerConfig& config,
                                  const OptimizationResult* ground = nullptr);

// Energy of a trial point with the same construction the optimizer uses.
EnergyBreakdown evaluate_point(StateKind kind, double alpha, const TrialParams& params,
                               const TrialParams* ground_params, double tolerance);

trial::SeparableState build_state(StateKind kind, double alpha, const TrialParams& params,
                                  const TrialParams* ground_params, double tolerance);

}  // namespace wedge::opt
