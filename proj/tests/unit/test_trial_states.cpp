#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wedge/energy.hpp"
#include "wedge/trial_states.hpp"

using namespace wedge;
using namespace wedge::trial;
constexpr double kPi = std::numbers::pi;

namespace {

numerics::QuadratureSpec tight() {
  numerics::QuadratureSpec s;
  s.relative_tolerance = 1e-12;
  s.absolute_tolerance = 1e-300;
  s.max_subdivisions = 2000;
  return s;
}

// ⟨a|b⟩ by brute-force nested quadrature of the evaluated wavefunctions.
double overlap_2d(const SeparableState& a, const SeparableState& b) {
  numerics::QuadratureSpec s;
  s.relative_tolerance = 1e-11;
  s.absolute_tolerance = 1e-15;
  s.max_subdivisions = 2000;
  const double h = 0.5 * a.alpha();
  auto line = [&](double t) {
    auto f = [&](double r) { return r > 0 ? a.evaluate(r, t) * b.evaluate(r, t) * r : 0.0; };
    return numerics::integrate_semi_infinite(f, s, 0.5).value_or_throw("radial");
  };
  return numerics::integrate_interval(line, -h, h, s).value_or_throw("angular");
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(TrialParams{1.0, 0.3, 0.5, 0.0}.validate());
  CHECK_THROWS_AS((TrialParams{0.0, 0.3, 0.5, 0.1}.validate()), DomainError);
  CHECK_THROWS_AS((TrialParams{1.0, 0.3, 1.5, 0.1}.validate()), DomainError);
  CHECK_THROWS_AS((TrialParams{1.0, 0.3, 0.5, -0.1}.validate()), DomainError);
  // p = 1, q = 0: γ vanishes on the wall.
  CHECK_THROWS_AS((TrialParams{1.0, 0.3, 1.0, 0.0}.validate()), NonNormalizableError);
  CHECK_THROWS_AS(SeparableState::ground({1.0, 0.3, 1.0, 0.0}, 2.0), NonNormalizableError);
}

TEST_CASE("wall-variable gamma agrees with the angular profile") {
  const TrialParams p{1.3, 0.4, 0.8, 0.05};
  const double alpha = 3.5;
  for (double y : {0.0, 1e-4, 0.2, 1.0, 1.5}) {
    const double theta = alpha / kPi * (0.5 * kPi - y);
    const auto g = gamma_profile(theta, p, alpha);
    CHECK(gamma_from_wall(p, y) == doctest::Approx(g.value).epsilon(1e-13));
    CHECK(gamma_dx_from_wall(p, y) * kPi / alpha == doctest::Approx(g.d1).epsilon(1e-12));
  }
  CHECK(gamma_from_wall(p, 0.0) == doctest::Approx(p.wall_decay()).epsilon(1e-15));
}

TEST_CASE("scaled moment ladder reproduces the radial moments") {
  const double m = 1.7, gref = 0.3;
  const detail::MomentLadder ladder(m, gref);
  for (double g : {0.3, 0.05, 1.2}) {
    const auto v = ladder.at(g);
    for (int j = 0; j < 5; ++j) {
      const double want = radial_moment(2 * m + j - 1, 2 * g);  // Γ(2m+j)/(2γ)^(2m+j)
      CHECK(v[j] * std::exp(ladder.log_scale()) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("ground normalization: closed form, state and 2D quadrature agree") {
  for (double alpha : {2.0, kPi, 4.5}) {
    const TrialParams p{1.4, 0.35, 0.6, 0.08};
    const auto s = SeparableState::ground(p, alpha, tight());
    CHECK(ground_normalization_closed_form(p, alpha, tight()) ==
          doctest::Approx(s.normalization()).epsilon(1e-10));
    CHECK(energy::norm_oracle_2d(s) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("constant-gamma normalization 4 q^2 / sqrt(3 alpha)") {
  for (double alpha : {1.0, 2.5, 6.0}) {
    const TrialParams p{1.0, 1e-14, 0.5, 0.2};
    CHECK(ground_normalization_closed_form(p, alpha, tight()) ==
          doctest::Approx(4 * 0.04 / std::sqrt(3 * alpha)).epsilon(1e-10));
  }
}

TEST_CASE("orthogonality constant from its defining integrals") {
  const OrthogonalityInputs in{{1.2, 0.3, 0.7, 0.1}, {0.9, 0.2, 0.5, 0.05}, 2.7};
  auto brute = [&](int n) {
    auto f = [&](double x) {
      const double th = in.alpha * x / kPi;
      const double g = gamma_profile(th, in.params0, in.alpha).value +
                       gamma_profile(th, in.params2, in.alpha).value;
      return std::pow(std::cos(x), n) / std::pow(g, in.params0.m + in.params2.m + n);
    };
    return numerics::integrate_interval(f, 0.0, 0.5 * kPi, tight()).value_or_throw("I_n");
  };
  CHECK(i_n_integral(2, in, tight()) == doctest::Approx(brute(2)).epsilon(1e-11));
  CHECK(i_n_integral(3, in, tight()) == doctest::Approx(brute(3)).epsilon(1e-11));
  CHECK(orthogonality_constant(in, tight()) ==
        doctest::Approx((1.2 + 0.9 + 2) * brute(3) / brute(2)).epsilon(1e-10));
}

TEST_CASE("excited state is orthogonal to its ground state") {
  for (double alpha : {2.0, kPi, 4.5}) {
    const TrialParams p0{1.1, 0.4, 0.8, 0.06};
    const TrialParams p2{0.9, 0.25, 0.5, 0.1};
    const auto s0 = SeparableState::ground(p0, alpha, tight());
    const auto s2 = SeparableState::excited(p2, p0, alpha, tight());
    CHECK(std::abs(overlap(s0, s2, tight())) <= 1e-8);
    CHECK(std::abs(overlap_2d(s0, s2)) <= 1e-8);
    CHECK(overlap(s2, s2, tight()) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("parity and channel overlaps") {
  const TrialParams p{1.0, 0.3, 0.7, 0.05};
  const auto g = SeparableState::ground(p, 4.0, tight());
  const auto a = SeparableState::antisymmetric(p, 4.0, tight());
  CHECK(g.parity() == 1);
  CHECK(a.parity() == -1);
  CHECK(overlap(g, a) == 0.0);
  CHECK(upper_half_overlap(g, g, tight()) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(upper_half_overlap(a, a, tight()) == doctest::Approx(0.5).epsilon(1e-10));
  // Fixed phase: positive at θ = α/4, odd state antisymmetric.
  CHECK(a.evaluate(4.0, 1.0) > 0.0);
  CHECK(a.evaluate(4.0, -1.0) == doctest::Approx(-a.evaluate(4.0, 1.0)));
}

TEST_CASE("analytic derivatives match finite differences") {
  const TrialParams p{1.3, 0.3, 0.6, 0.1};
  const TrialParams p0{1.1, 0.4, 0.8, 0.06};
  for (const auto& s : {SeparableState::ground(p, 3.0), SeparableState::antisymmetric(p, 3.0),
                        SeparableState::excited(p, p0, 3.0)}) {
    const double r = 2.3, t = 0.4, h = 1e-5;
    const auto d = s.evaluate_derivatives(r, t);
    CHECK(d.psi == doctest::Approx(s.evaluate(r, t)).epsilon(1e-14));
    CHECK(d.dr == doctest::Approx((s.evaluate(r + h, t) - s.evaluate(r - h, t)) / (2 * h)).epsilon(1e-7));
    CHECK(d.dtheta ==
          doctest::Approx((s.evaluate(r, t + h) - s.evaluate(r, t - h)) / (2 * h)).epsilon(1e-7));
    CHECK(d.dr2 == doctest::Approx((s.evaluate(r + h, t) - 2 * d.psi + s.evaluate(r - h, t)) / (h * h))
                       .epsilon(1e-4));
  }
}

TEST_CASE("wavefunction domain and wall behaviour") {
  const auto s = SeparableState::ground({1.0, 0.3, 0.7, 0.05}, 2.0);
  CHECK_THROWS_AS(s.evaluate(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(s.evaluate(1.0, 1.2), DomainError);
  CHECK(std::abs(s.evaluate(1.0, 1.0 - 1e-9)) < 1e-8);
  // log offset divides by e^offset.
  CHECK(s.evaluate(1.0, 0.3, 2.0) == doctest::Approx(s.evaluate(1.0, 0.3) * std::exp(-2.0)));
}

TEST_CASE("near-wall-limit states stay finite in log space") {
  // γ_wall = 1e-6·n with m = 40: the norm underflows, its logarithm does not.
  TrialParams p{40.0, 0.25, 0.0, 0.0};
  p.p = 1.0 - 2.0 * 1e-6 / kPi;
  const auto s = SeparableState::ground(p, 4.0, tight());
  CHECK(std::isfinite(s.log_normalization()));
  CHECK(s.log_unit_norm_integral(tight()) + 2 * s.log_normalization() ==
        doctest::Approx(0.0).epsilon(1e-10));
}
