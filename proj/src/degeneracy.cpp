#include "wedge/degeneracy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wedge/parallel.hpp"

namespace wedge::degeneracy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn10 = 2.302585092994046;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

SweepRecord run_alpha(double alpha, const OptimizerConfig& config) {
  SweepRecord rec;
  rec.alpha = alpha;
  try {
    auto ground = opt::optimize_state(trial::StateKind::ground, alpha, config);
    auto anti = opt::optimize_state(trial::StateKind::antisymmetric, alpha, config);
    auto excited = opt::optimize_state(trial::StateKind::excited, alpha, config, &ground);
    rec = assemble_record(alpha, ground, anti, excited);
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.status = e.what();
  }
  return rec;
}

}  // namespace

SweepRecord assemble_record(double alpha, const OptimizationResult& ground,
                            const OptimizationResult& antisymmetric,
                            const OptimizationResult& excited) {
  SweepRecord rec;
  rec.alpha = alpha;
  rec.results = {ground, antisymmetric, excited};
  for (int k = 0; k < 3; ++k) {
    if (rec.results[k].alpha != alpha || static_cast<int>(rec.results[k].kind) != k)
      throw DomainError("sweep record assembled from mismatched results");
    rec.energy[k] = rec.results[k].best_energy.total;
    rec.virial[k] = rec.results[k].best_energy.virial_residual;
    rec.boundary[k] = rec.results[k].boundary_active;
  }
  rec.gap01 = rec.energy[1] - rec.energy[0];
  rec.gap02 = rec.energy[2] - rec.energy[0];
  const Splitting sp = bisector_splitting(single_well_from_pair(ground, antisymmetric));
  rec.splitting = sp.value;
  rec.splitting_log10 = sp.log10_abs;
  rec.ok = true;
  rec.status = "ok";
  return rec;
}

void check_ordering(const std::vector<SweepRecord>& records) {
  for (const auto& r : records) {
    if (r.ok && r.energy[0] > r.energy[1] + kOrderingTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "level ordering violated at α = " << r.alpha << ": E0 = " << r.energy[0]
         << " a.u. lies above E1 = " << r.energy[1] << " a.u.";
      throw OptimizationError(os.str());
    }
  }
}

std::vector<SweepRecord> sweep(const std::vector<double>& alphas, const OptimizerConfig& config) {
  config.validate();
  for (double a : alphas) WedgeGeometry{a};
  const int n = static_cast<int>(alphas.size());
  // α values run side by side; restarts inside each α then run serially.
  OptimizerConfig inner = config;
  const Execution outer = (n > 1) ? config.execution : Execution::serial;
  if (outer == Execution::parallel) inner.execution = Execution::serial;

  std::vector<SweepRecord> records(n);
  for_each_index(n, outer, [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    records[i] = run_alpha(alphas[i], inner);
    records[i].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  check_ordering(records);
  return records;
}

SingleWellState single_well_from_pair(const OptimizationResult& ground,
                                      const OptimizationResult& antisymmetric, double tolerance) {
  if (ground.kind != trial::StateKind::ground ||
      antisymmetric.kind != trial::StateKind::antisymmetric)
    throw DomainError("single-well construction needs a ground and an antisymmetric result");
  if (ground.alpha != antisymmetric.alpha)
    throw DomainError("ground and antisymmetric results are for different α");
  const double alpha = ground.alpha;
  const auto s0 = opt::build_state(trial::StateKind::ground, alpha, ground.best_params, nullptr,
                                   tolerance);
  const auto s1 = opt::build_state(trial::StateKind::antisymmetric, alpha,
                                   antisymmetric.best_params, nullptr, tolerance);

  numerics::QuadratureSpec spec;
  spec.relative_tolerance = tolerance;
  spec.max_subdivisions = 2000;
  const double cross = trial::upper_half_overlap(s0, s1, spec);
  if (cross < 0.0)
    throw DomainError("phase mismatch: ψ₀ and ψ₁ overlap negatively in the upper channel");

  const double ls = std::max(s0.log_normalization(), s1.log_normalization());
  SingleWellState st;
  st.provenance = SingleWellState::Provenance::variational_pair;
  st.alpha = alpha;
  st.log_scale = ls;
  st.eval = [s0, s1, ls](double r, double theta) {
    const auto a = s0.evaluate_derivatives(r, theta, ls);
    const auto b = s1.evaluate_derivatives(r, theta, ls);
    return FieldValue{kInvSqrt2 * (a.psi + b.psi),
                      kInvSqrt2 * (a.dr + b.dr),
                      kInvSqrt2 * (a.dtheta + b.dtheta)};
  };
  const double g0 = ground.best_params.n + ground.best_params.q;
  const double g1 = antisymmetric.best_params.n + antisymmetric.best_params.q;
  st.bisector_decay = 2.0 * std::min(g0, g1);
  // On θ = 0, ψ₁ and ∂θψ₀ vanish, so ψ_L ∂θψ_L = ½ ψ₀ ∂θψ₁ exactly. Each
  // factor keeps its own scale; the summed field above can lose ψ₁ entirely
  // when the two normalizations differ by hundreds of decades.
  const double l0 = s0.log_normalization();
  const double l1 = s1.log_normalization();
  st.bisector_product = [s0, s1, l0, l1](double r) {
    return 0.5 * s0.evaluate(r, 0.0, l0) * s1.evaluate_derivatives(r, 0.0, l1).dtheta;
  };
  st.bisector_log_scale = l0 + l1;
  st.upper_mass = 0.5 + cross;
  st.lower_mass = 0.5 - cross;
  return st;
}

SingleWellState analytic_channel_state(double alpha) {
  const WedgeGeometry geom(alpha);
  if (alpha >= 2.0 * kPi) throw DomainError("analytic channel state needs α < 2π");
  constexpr double c = 0.25;  // ∫₀^∞ (d e^{-d/4})² dd = 16
  SingleWellState st;
  st.provenance = SingleWellState::Provenance::analytic_channel;
  st.alpha = alpha;
  st.eval = [alpha](double r, double theta) {
    const double phi = 0.5 * alpha - theta;
    const double d = r * std::sin(phi);
    const double e = std::exp(-0.25 * d);
    const double dphi_dd = c * (1.0 - 0.25 * d) * e;
    return FieldValue{c * d * e, dphi_dd * std::sin(phi), -dphi_dd * r * std::cos(phi)};
  };
  st.bisector_decay = std::max(0.5 * std::sin(0.5 * alpha), 1e-3);
  st.upper_mass = std::numeric_limits<double>::quiet_NaN();
  st.lower_mass = std::numeric_limits<double>::quiet_NaN();
  return st;
}

SingleWellState field_of(const trial::SeparableState& state, double log_scale) {
  SingleWellState st;
  st.provenance = SingleWellState::Provenance::variational_pair;
  st.alpha = state.alpha();
  st.log_scale = log_scale;
  st.eval = [state, log_scale](double r, double theta) {
    const auto d = state.evaluate_derivatives(r, theta, log_scale);
    return FieldValue{d.psi, d.dr, d.dtheta};
  };
  st.bisector_decay = 2.0 * (state.params().n + state.params().q);
  st.upper_mass = st.lower_mass = std::numeric_limits<double>::quiet_NaN();
  return st;
}

Splitting bisector_splitting(const SingleWellState& psi_l, const numerics::QuadratureSpec& spec) {
  const bool product = static_cast<bool>(psi_l.bisector_product);
  auto integrand = [&](double r) {
    if (product) return 2.0 * psi_l.bisector_product(r) / r;
    const FieldValue v = psi_l.eval(r, 0.0);
    return 2.0 * v.psi * v.dtheta / r;
  };
  // ψ_L ~ r^μ at the corner; the integrand ~ r^(2μ-1) needs μ > 0.
  const double r_small = 1e-12;
  const FieldValue probe = psi_l.eval(r_small, 0.0);
  if (!std::isfinite(probe.psi) || !std::isfinite(probe.dtheta))
    throw DomainError("single-well state is not finite near the corner");
  const double v =
      numerics::integrate_semi_infinite(integrand, spec, psi_l.bisector_decay)
          .value_or_throw("bisector splitting integral");
  Splitting out;
  const double log_abs = (v == 0.0) ? -std::numeric_limits<double>::infinity()
                                    : std::log(std::abs(v)) +
                                          (product ? psi_l.bisector_log_scale
                                                   : 2.0 * psi_l.log_scale);
  out.value = (v == 0.0) ? 0.0 : std::copysign(std::exp(log_abs), v);
  out.log10_abs = log_abs / kLn10;
  return out;
}

CurrentResidual current_residual(const SingleWellState& psi_l, const SingleWellState& psi_pm,
                                 double energy_l, double energy_pm, const PolarGrid& grid) {
  if (grid.radial < 4 || grid.angular < 4)
    throw DomainError("grid too coarse for the flux stencil: need at least 4×4 cells");
  if (!(grid.r_max > 0.0)) throw DomainError("grid r_max must be positive");
  if (psi_l.alpha != psi_pm.alpha) throw DomainError("fields live on different wedges");

  const double half = 0.5 * psi_l.alpha;
  const int nr = grid.radial;
  const int nt = grid.angular;
  const double dr = grid.r_max / nr;
  const double dt = half / nt;
  const double de = energy_pm - energy_l;

  auto flux = [&](double r, double theta) {
    const FieldValue a = psi_l.eval(r, theta);
    const FieldValue b = psi_pm.eval(r, theta);
    // J = ψ_L∇ψ± - ψ±∇ψ_L, components (J_r, J_θ)
    return std::array<double, 2>{a.psi * b.dr - b.psi * a.dr,
                                 (a.psi * b.dtheta - b.psi * a.dtheta) / r};
  };

  CurrentResidual out;
  out.log_scale = psi_l.log_scale + psi_pm.log_scale;
  out.r.resize(static_cast<std::size_t>(nr) * nt);
  out.theta.resize(out.r.size());
  out.residual.resize(out.r.size());
  std::vector<double> cell_div(out.r.size());

  for_each_index(nr, Execution::parallel, [&](int i) {
    const double rc = (i + 0.5) * dr;
    const double rm = i * dr;
    const double rp = (i + 1) * dr;
    for (int j = 0; j < nt; ++j) {
      const double tc = (j + 0.5) * dt;
      const double tm = j * dt;
      const double tp = std::min((j + 1) * dt, half);
      const double outer_face = rp * flux(rp, tc)[0];
      const double inner_face = (i == 0) ? 0.0 : rm * flux(rm, tc)[0];
      const double div = (outer_face - inner_face) / (rc * dr) +
                         (flux(rc, tp)[1] - flux(rc, tm)[1]) / (rc * dt);
      const FieldValue a = psi_l.eval(rc, tc);
      const FieldValue b = psi_pm.eval(rc, tc);
      const std::size_t k = static_cast<std::size_t>(i) * nt + j;
      out.r[k] = rc;
      out.theta[k] = tc;
      cell_div[k] = div;
      out.residual[k] = -0.5 * div - de * a.psi * b.psi;
    }
  });

  // Serial, index-ordered sums keep the totals reproducible.
  for (int j = 0; j < nt; ++j)
    out.outer_flux += grid.r_max * flux(grid.r_max, (j + 0.5) * dt)[0] * dt;
  for (std::size_t k = 0; k < out.r.size(); ++k) {
    const double area = out.r[k] * dr * dt;
    out.volume_divergence += cell_div[k] * area;
    out.integrated_residual += out.residual[k] * area;
  }

  numerics::QuadratureSpec spec;
  spec.relative_tolerance = 1e-10;
  spec.absolute_tolerance = 1e-300;
  spec.max_subdivisions = 2000;
  const double decay = 0.5 * (psi_l.bisector_decay + psi_pm.bisector_decay);
  out.line_term = -numerics::integrate_semi_infinite(
                       [&](double r) { return r > 0.0 ? flux(r, 0.0)[1] : 0.0; }, spec, decay)
                       .value_or_throw("bisector current integral");
  return out;
}

std::optional<double> degeneracy_onset(const std::vector<SweepRecord>& records, double threshold) {
  if (!(threshold >= 0.0)) throw DomainError("onset threshold must be non-negative");
  for (std::size_t i = 1; i < records.size(); ++i)
    if (!(records[i - 1].alpha < records[i].alpha))
      throw DomainError("degeneracy_onset needs records sorted by strictly increasing α");
  // A zero threshold asks for exact degeneracy, which finite precision never
  // delivers.
  if (threshold == 0.0) return std::nullopt;
  std::optional<double> onset;
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (!it->ok || !(it->gap01 <= threshold)) break;
    onset = it->alpha;
  }
  return onset;
}

}  // namespace wedge::degeneracy
