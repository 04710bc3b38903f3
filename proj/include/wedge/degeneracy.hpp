#pragma once

// α sweeps of the three variational levels, the single-channel construction
// used to estimate the symmetric/antisymmetric splitting from the wavefunction
// on the bisector, and the current-identity diagnostic behind that estimate.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wedge/optimizer.hpp"

namespace wedge::degeneracy {

using opt::OptimizationResult;
using opt::OptimizerConfig;

struct SweepRecord {
  double alpha = 0.0;
  std::array<double, 3> energy{};  // E0, E1, E2 in a.u.
  double gap01 = 0.0;              // E1 - E0, signed
  double gap02 = 0.0;
  double splitting = 0.0;          // bisector estimate, a.u.; may underflow to 0
  double splitting_log10 = 0.0;    // log10 |splitting|, never underflows
  std::array<double, 3> virial{};
  std::array<std::array<bool, 4>, 3> boundary{};
  std::vector<OptimizationResult> results;  // ground, antisymmetric, excited
  double seconds = 0.0;
  bool ok = false;
  std::string status;  // "ok" or the failure message
};

// Per-α failures are recorded and the sweep continues. An ordering violation
// E0 > E1 + 1e-9 a.u. aborts with OptimizationError.
std::vector<SweepRecord> sweep(const std::vector<double>& alphas, const OptimizerConfig& config);

inline constexpr double kOrderingTolerance = 1e-9;

// Builds the record for one α from the three optima (ground, antisymmetric,
// excited), including the bisector splitting of the pair.
SweepRecord assemble_record(double alpha, const OptimizationResult& ground,
                            const OptimizationResult& antisymmetric,
                            const OptimizationResult& excited);

// Throws OptimizationError naming the first record with E0 > E1 + tolerance.
void check_ordering(const std::vector<SweepRecord>& records);

// ψ, ∂ψ/∂r and ∂ψ/∂θ at (r, θ), all divided by e^log_scale.
struct FieldValue {
  double psi;
  double dr;
  double dtheta;
};

struct SingleWellState {
  enum class Provenance { variational_pair, analytic_channel };
  Provenance provenance;
  double alpha;
  std::function<FieldValue(double r, double theta)> eval;
  double log_scale = 0.0;
  // Decay rate of ψ² along θ = 0, used to map the radial quadrature.
  double bisector_decay = 0.5;
  // Masses in θ > 0 and θ < 0 (full-wedge normalization); NaN when the state
  // is only defined per unit wall length.
  double upper_mass = 0.0;
  double lower_mass = 0.0;
  // Optional ψ_L ∂θψ_L on θ = 0 divided by e^bisector_log_scale, used by the
  // splitting integral in place of eval when set.
  std::function<double(double r)> bisector_product;
  double bisector_log_scale = 0.0;
};

// ψ_L = (ψ₀ + ψ₁)/√2 from a ground and an antisymmetric optimum at the same
// α. Unit norm over the whole opening; channel masses 1/2 ± ∫_{θ>0} ψ₀ψ₁.
SingleWellState single_well_from_pair(const OptimizationResult& ground,
                                      const OptimizationResult& antisymmetric,
                                      double tolerance = 1e-12);

// ψ_L = C d e^{-d/4}, d = r sin(α/2 - θ): the planar surface state of the
// upper wall. It does not decay along the wall, so C = 1/4 normalizes it per
// unit wall length only.
SingleWellState analytic_channel_state(double alpha);

// Wrap one separable state as a field (for current_residual).
SingleWellState field_of(const trial::SeparableState& state, double log_scale);

struct Splitting {
  double value;      // 2∫ψ_L (1/r)∂θψ_L dr on θ = 0, a.u.
  double log10_abs;  // -inf when the integral vanishes
};

Splitting bisector_splitting(const SingleWellState& psi_l,
                        const numerics::QuadratureSpec& spec = numerics::QuadratureSpec{});

struct PolarGrid {
  int radial = 64;
  int angular = 64;
  double r_max = 40.0;
};

struct CurrentResidual {
  // Cell-centred values on θ ∈ (0, α/2), r ∈ (0, r_max); index i·angular + j.
  std::vector<double> r;
  std::vector<double> theta;
  std::vector<double> residual;
  double integrated_residual = 0.0;  // ∫∫ residual dA
  double volume_divergence = 0.0;    // ∫∫ ∇·J dA, finite volume
  double line_term = 0.0;            // -∫ J_θ(r, 0) dr, quadrature
  double outer_flux = 0.0;           // ∫ r_max J_r(r_max, θ) dθ, midpoint
  // volume_divergence ≈ line_term + outer_flux up to the midpoint error of
  // the bisector sum; the walls carry no flux because ψ vanishes there.
  double log_scale = 0.0;            // every field above is scaled by e^-log_scale
};

// Residual of -½∇·(ψ_L∇ψ± - ψ±∇ψ_L) - (E± - E_L)ψ_Lψ± on the upper half of
// the opening. The divergence uses a flux-form stencil with face values of
// the analytic gradients, so the summed divergence telescopes to the
// boundary fluxes. Errors when either grid dimension is below 4.
CurrentResidual current_residual(const SingleWellState& psi_l, const SingleWellState& psi_pm,
                                 double energy_l, double energy_pm, const PolarGrid& grid);

// Smallest sampled α from which every record has gap01 <= threshold (a.u.).
// Failed records never satisfy the threshold. Records must be sorted by α.
std::optional<double> degeneracy_onset(const std::vector<SweepRecord>& records, double threshold);

}  // namespace wedge::degeneracy
