#include "wedge/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "wedge/degeneracy.hpp"
#include "wedge/energy.hpp"
#include "wedge/optimizer.hpp"
#include "wedge/potential.hpp"

namespace wedge::checks {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Log-uniform draw of a comfortably interior trial point.
trial::TrialParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
  trial::TrialParams p;
  p.m = logu(0.6, 3.0);
  p.n = logu(0.05, 0.8);
  p.p = 0.2 + 0.7 * u(rng);
  p.q = logu(0.02, 0.4);
  return p;
}

class Battery {
 public:
  explicit Battery(const CheckOptions& o) : opt_(o) {}

  void add(const std::string& name, double measured, double tolerance, std::string detail = {}) {
    CheckResult r{name, measured, tolerance, false, std::move(detail)};
    r.pass = std::isfinite(measured) && measured <= tolerance;
    out_.push_back(std::move(r));
  }

  // A check whose computation throws is a failure, not an abort.
  void guarded(const std::string& name, double tolerance, const std::function<double()>& body) {
    try {
      add(name, body(), tolerance);
    } catch (const std::exception& e) {
      add(name, std::numeric_limits<double>::infinity(), tolerance, e.what());
    }
  }

  std::vector<CheckResult> take() { return std::move(out_); }
  const CheckOptions& options() const { return opt_; }

 private:
  CheckOptions opt_;
  std::vector<CheckResult> out_;
};

}  // namespace

std::vector<CheckResult> limits_check(const CheckOptions& options) {
  Battery b(options);
  numerics::QuadratureSpec kspec = potential::kernel_spec();
  kspec.relative_tolerance = options.quad_tolerance;
  numerics::QuadratureSpec spec;
  spec.relative_tolerance = options.quad_tolerance;
  spec.absolute_tolerance = 1e-300;
  spec.max_subdivisions = 2000;
  // Null tests integrate to exactly 0, so they need an absolute floor.
  numerics::QuadratureSpec null_spec;
  null_spec.relative_tolerance = std::max(options.quad_tolerance, 1e-10);
  null_spec.absolute_tolerance = 1e-14;
  std::mt19937_64 rng(options.seed);

  // Kernel limits.
  b.guarded("k(pi) = 0", 1e-8, [&] {
    const double k = potential::k_coefficient(kPi, kspec);
    return std::abs(k) + (options.inject_fault ? 1e-3 : 0.0);
  });
  b.guarded("k(pi/2) = 1", 1e-7, [&] { return std::abs(potential::k_coefficient(kPi / 2, kspec) - 1.0); });
  b.guarded("k(2pi) = -1/pi", 1e-7,
            [&] { return std::abs(potential::k_coefficient(2 * kPi, kspec) + 1.0 / kPi); });
  b.guarded("f(theta, pi) = 1/cos(theta)", 1e-8, [&] {
    double worst = 0.0;
    for (double t : {0.0, 0.3, 0.8, 1.2, 1.45})
      worst = std::max(worst, rel(potential::f_profile(t, kPi, kspec), 1.0 / std::cos(t)));
    return worst;
  });
  b.guarded("f(0, pi/2) = 2 sqrt2", 1e-7, [&] {
    return std::abs(potential::f_profile(0.0, kPi / 2, kspec) - 2.0 * std::numbers::sqrt2);
  });

  // Kelvin images.
  for (int n : {1, 2, 3}) {
    b.guarded("image sum, alpha = pi/" + std::to_string(n), 1e-6, [&] {
      const WedgeGeometry g(kPi / n);
      std::uniform_real_distribution<double> ur(0.2, 8.0), ut(-0.95, 0.95);
      double worst = 0.0;
      for (int i = 0; i < 20; ++i) {
        const double r = ur(rng);
        const double t = ut(rng) * g.half_angle();
        worst = std::max(worst, rel(potential::image_potential_energy(r, t, g, kspec),
                                    potential::image_oracle(r, t, n)));
      }
      return worst;
    });
  }

  // Normalization.
  b.guarded("N0 closed form vs 2D quadrature", 1e-6, [&] {
    double worst = 0.0;
    for (double alpha : {2.0, kPi, 4.5}) {
      const auto p = random_params(rng);
      const auto s = trial::SeparableState::ground(p, alpha, spec);
      const double closed = trial::ground_normalization_closed_form(p, alpha, spec);
      // ∫∫|ψ|² = 1 with N from the closed form.
      worst = std::max(worst, std::abs(std::pow(closed / s.normalization(), 2) *
                                           energy::norm_oracle_2d(s) - 1.0));
    }
    return worst;
  });
  b.guarded("N0 constant-gamma closed form", 1e-9, [&] {
    double worst = 0.0;
    for (double alpha : {1.0, kPi, 5.5}) {
      trial::TrialParams p{1.0, 1e-14, 0.5, 0.3};
      const double want = 4.0 * p.q * p.q / std::sqrt(3.0 * alpha);
      worst = std::max(worst, rel(trial::ground_normalization_closed_form(p, alpha, spec), want));
    }
    return worst;
  });

  // Energy engines.
  b.guarded("energy: reduced vs 2D oracle vs E0 integrand", 1e-6, [&] {
    double worst = 0.0;
    for (double alpha : {2.0, kPi, 4.5}) {
      const auto angular = potential::PotentialCache::global().get(
          alpha, potential::AngularPotential::Mode::interpolated);
      for (int i = 0; i < 2; ++i) {
        const auto p = random_params(rng);
        const auto s = trial::SeparableState::ground(p, alpha, spec);
        const double reduced = energy::expectation_reduced(s, *angular, spec).total;
        const double oracle = energy::expectation_oracle_2d(s).total;
        const double e0 = energy::e0_abc_formula(p, *angular, energy::TanSign::minus, spec);
        worst = std::max({worst, rel(oracle, reduced), rel(e0, reduced)});
      }
    }
    return worst;
  });
  b.guarded("scaling covariance (n, q) -> 2(n, q)", 1e-10, [&] {
    double worst = 0.0;
    for (double alpha : {2.0, 4.5}) {
      auto p = random_params(rng);
      const auto e1 = energy::expectation_reduced(trial::SeparableState::ground(p, alpha, spec), spec);
      p.n *= 2.0;
      p.q *= 2.0;
      const auto e2 = energy::expectation_reduced(trial::SeparableState::ground(p, alpha, spec), spec);
      worst = std::max({worst, rel(e2.kinetic, 4.0 * e1.kinetic), rel(e2.potential, 2.0 * e1.potential)});
    }
    return worst;
  });
  b.guarded("virial at the ground optimum, alpha = 2", 1e-3, [&] {
    opt::OptimizerConfig c;
    c.restarts = 4;
    c.seed = options.seed;
    c.final_tolerance = options.quad_tolerance;
    return opt::optimize_state(trial::StateKind::ground, 2.0, c).best_energy.virial_residual;
  });
  b.guarded("orthogonality <psi0|psi2>", 1e-8, [&] {
    double worst = 0.0;
    for (double alpha : {2.0, kPi, 4.5}) {
      const auto p0 = random_params(rng);
      const auto p2 = random_params(rng);
      const auto s0 = trial::SeparableState::ground(p0, alpha, spec);
      const auto s2 = trial::SeparableState::excited(p2, p0, alpha, spec);
      worst = std::max(worst, std::abs(trial::overlap(s0, s2, spec)));
    }
    return worst;
  });

  // Bisector machinery.
  b.guarded("splitting of an even state is 0", 1e-10, [&] {
    const auto s = trial::SeparableState::ground(random_params(rng), 3.5, spec);
    return std::abs(degeneracy::bisector_splitting(degeneracy::field_of(s, s.log_normalization()), null_spec).value);
  });
  b.guarded("splitting of the analytic channel state is 0", 1e-10, [&] {
    double worst = 0.0;
    for (double alpha : {2.0, 3.5, 5.0})
      worst = std::max(worst, std::abs(degeneracy::bisector_splitting(
                                           degeneracy::analytic_channel_state(alpha), null_spec)
                                           .value));
    return worst;
  });
  b.guarded("current residual with psi(+-) = psi_L", 1e-10, [&] {
    const auto s = trial::SeparableState::ground(random_params(rng), 3.5, spec);
    const auto f = degeneracy::field_of(s, s.log_normalization());
    const auto cr = degeneracy::current_residual(f, f, -0.03, -0.03, degeneracy::PolarGrid{16, 16, 20.0});
    double worst = 0.0;
    for (double v : cr.residual) worst = std::max(worst, std::abs(v));
    return worst;
  });

  return b.take();
}

}  // namespace wedge::checks
