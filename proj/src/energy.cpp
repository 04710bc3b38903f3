#include "wedge/energy.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace wedge::energy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

}  // namespace

EnergyBreakdown EnergyBreakdown::from_parts(double kinetic, double potential) {
  EnergyBreakdown e;
  e.kinetic = kinetic;
  e.potential = potential;
  e.total = kinetic + potential;
  e.virial_residual = std::abs(2.0 * kinetic + potential) / std::abs(e.total);
  return e;
}

EnergyBreakdown expectation_reduced(const SeparableState& state,
                                    const potential::AngularPotential& angular,
                                    const QuadratureSpec& spec) {
  if (std::abs(angular.alpha() - state.alpha()) > 1e-15 * state.alpha())
    throw DomainError("angular potential built for a different opening angle");
  const TrialParams& prm = state.params();
  const double s = kPi / state.alpha();
  const double k = angular.k();
  const trial::detail::MomentLadder ladder(prm.m, prm.wall_decay());
  const auto& terms = state.terms();

  // y = π/2 - x throughout, see trial::gamma_from_wall.
  auto integrand = [&](double y) {
    const double c = std::sin(y);
    const double g = trial::gamma_from_wall(prm, y);
    const double g1 = s * trial::gamma_dx_from_wall(prm, y);  // dγ/dθ
    const auto mom = ladder.at(g);

    // ∂ψ/∂r and (1/r)∂ψ/∂θ as Σ_k coeff_k r^(m-1+k) e^{-γr}.
    std::array<double, 3> radial{};
    std::array<double, 3> angular_grad{};
    std::array<double, 2> v{};
    std::array<double, 2> u{};
    std::array<int, 2> off{};
    const std::size_t nt = terms.size();
    for (std::size_t j = 0; j < nt; ++j) {
      const auto val = terms[j].factor.evaluate_from_wall(y);
      const int d = terms[j].power_offset;
      const double mu = prm.m + d;
      radial[d] += mu * val.value;
      radial[d + 1] -= g * val.value;
      angular_grad[d] += val.d1;
      angular_grad[d + 1] -= g1 * val.value;
      v[j] = val.value;
      u[j] = terms[j].factor.reduced_from_wall(y);
      off[j] = d;
    }
    double kinetic = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        kinetic += (radial[a] * radial[b] + angular_grad[a] * angular_grad[b]) * mom[a + b];
    kinetic *= 0.5;

    // v_i v_j (k - f) = u_i u_j cos(x) (k cos(x) - w)
    const double pot_weight = c * (k * c - angular.w(kHalfPi - y));
    double norm = 0.0;
    double pot = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = 0; j < nt; ++j) {
        norm += v[i] * v[j] * mom[2 + off[i] + off[j]];
        pot += u[i] * u[j] * mom[1 + off[i] + off[j]];
      }
    }
    pot *= 0.25 * pot_weight;
    return std::array<double, 3>{norm, kinetic, pot};
  };

  const auto pts = trial::wall_breakpoints(prm);
  const auto res = numerics::integrate_interval_vec<3>(integrand, 0.0, kHalfPi, spec, pts);
  const auto& val = res.value_or_throw("reduced energy integral");
  return EnergyBreakdown::from_parts(val[1] / val[0], val[2] / val[0]);
}

EnergyBreakdown expectation_reduced(const SeparableState& state, const QuadratureSpec& spec) {
  auto angular = potential::PotentialCache::global().get(
      state.alpha(), potential::AngularPotential::Mode::interpolated);
  return expectation_reduced(state, *angular, spec);
}

double e0_abc_formula(const TrialParams& params0, const potential::AngularPotential& angular,
                        TanSign sign, const QuadratureSpec& spec) {
  params0.validate();
  const double alpha = angular.alpha();
  const double s = kPi / alpha;
  const double m = params0.m;
  const double k = angular.k();
  const double log_n0 = trial::detail::log_ground_normalization(params0, alpha, spec);
  const double log_wall = std::log(params0.wall_decay());

  const double a_coeff = m * m - s * s;
  const double tan_sign = (sign == TanSign::plus) ? 1.0 : -1.0;

  auto integrand = [&](double y) {
    const double c = std::sin(y);
    const double sx = std::cos(y);
    const double g = trial::gamma_from_wall(params0, y);
    // Primes are derivatives with respect to x = πθ/α.
    const double gx = trial::gamma_dx_from_wall(params0, y);
    const double gxx = -params0.p * params0.p * (g - params0.q);
    const double inv_pow = std::exp(-(2.0 * m + 2.0) * (std::log(g) - log_wall));

    const double cc = g * g + s * s * gx * gx;
    // cos²x · B with tan(x)cos²x = sin(x)cos(x) and g·cos²x = k cos²x - w cos x.
    const double b_cos2 = c * c * ((2.0 * m + 1.0) * g + s * s * gxx) +
                          tan_sign * 2.0 * s * s * sx * c * gx +
                          0.5 * (k * c * c - angular.w(kHalfPi - y) * c);
    return inv_pow * (c * c * (a_coeff * g * g / (m * (m + 0.5)) + cc) -
                      b_cos2 * g / (m + 0.5));
  };
  const double integral =
      numerics::integrate_interval(integrand, 0.0, kHalfPi, spec, trial::wall_breakpoints(params0))
          .value_or_throw("E0 integrand");
  const double log_pref = std::log(alpha) + 2.0 * log_n0 - (2.0 * m + 2.0) * log_wall +
                          numerics::log_gamma(2.0 * m + 2.0) - (2.0 * m + 2.0) * std::log(2.0) -
                          std::log(kPi);
  return -std::exp(log_pref) * integral;
}

OracleOptions::OracleOptions() {
  outer.relative_tolerance = 1e-10;
  outer.absolute_tolerance = 1e-15;
  outer.max_subdivisions = 2000;
  inner.relative_tolerance = 1e-12;
  inner.absolute_tolerance = 1e-17;
  inner.max_subdivisions = 2000;
}

namespace {

std::array<double, 3> oracle_integrals(const SeparableState& state, const OracleOptions& opt,
                                       bool with_energy) {
  const double alpha = state.alpha();
  const double s = kPi / alpha;
  const double k = with_energy ? potential::k_coefficient(alpha) : 0.0;

  auto line = [&](double y) {
    const double x = kHalfPi - y;
    const double theta = x / s;
    const double c = std::sin(y);
    const double w = with_energy ? potential::wall_weighted_profile(x, alpha) : 0.0;
    const double g = trial::gamma_from_wall(state.params(), y);
    auto radial = [&](double r) {
      const auto d = state.evaluate_derivatives(r, theta);
      const double norm = d.psi * d.psi * r;
      if (!with_energy) return std::array<double, 3>{norm, 0.0, 0.0};
      const double kinetic = 0.5 * (d.dr * d.dr + d.dtheta * d.dtheta / (r * r)) * r;
      // (k - f)/(4r) · ψ² · r with f = w / cos(x)
      const double pot = 0.25 * (k * d.psi * d.psi - w * d.psi * (d.psi / c));
      return std::array<double, 3>{norm, kinetic, pot};
    };
    auto res = numerics::integrate_semi_infinite_vec<3>(radial, opt.inner, 2.0 * g);
    if (!res.converged) {
      std::ostringstream os;
      os.precision(17);
      os << "2D oracle radial line θ = " << theta;
      throw QuadratureError(os.str() + ": " + res.failure);
    }
    return res.value;
  };
  const auto pts = trial::wall_breakpoints(state.params());
  const auto res = numerics::integrate_interval_vec<3>(line, 0.0, kHalfPi, opt.outer, pts);
  auto val = res.value_or_throw("2D oracle angular integral");
  for (auto& v : val) v *= 2.0 / s;  // dθ = dx/s, two symmetric halves
  return val;
}

}  // namespace

EnergyBreakdown expectation_oracle_2d(const SeparableState& state, const OracleOptions& options) {
  const auto val = oracle_integrals(state, options, true);
  return EnergyBreakdown::from_parts(val[1] / val[0], val[2] / val[0]);
}

double norm_oracle_2d(const SeparableState& state, const OracleOptions& options) {
  return oracle_integrals(state, options, false)[0];
}

}  // namespace wedge::energy
