#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wedge/energy.hpp"
#include "wedge/optimizer.hpp"

using namespace wedge;
using namespace wedge::energy;
using trial::SeparableState;
using trial::TrialParams;
constexpr double kPi = std::numbers::pi;

namespace {

numerics::QuadratureSpec tight() {
  numerics::QuadratureSpec s;
  s.relative_tolerance = 1e-12;
  s.absolute_tolerance = 1e-300;
  s.max_subdivisions = 2000;
  return s;
}

std::shared_ptr<const potential::AngularPotential> angular(double alpha) {
  return potential::PotentialCache::global().get(alpha,
                                                 potential::AngularPotential::Mode::interpolated);
}

}  // namespace

// T and V from an independent 20-digit evaluation (closed radial moments,
// tanh-sinh over θ, the image kernel integrated afresh at every node).
TEST_CASE("ground-state energy against a high-precision reference") {
  const TrialParams p{1.5, 0.3, 0.7, 0.1};
  const auto s = SeparableState::ground(p, 2.0, tight());
  const auto e = expectation_reduced(s, *angular(2.0), tight());
  CHECK(e.kinetic == doctest::Approx(0.0831528043712063916).epsilon(1e-11));
  CHECK(e.potential == doctest::Approx(-0.103000851546073633).epsilon(1e-9));
  const auto o = expectation_oracle_2d(s);
  CHECK(o.kinetic == doctest::Approx(0.0831528043712063916).epsilon(1e-9));
  CHECK(o.potential == doctest::Approx(-0.103000851546073633).epsilon(1e-9));

  // A wide wedge with weak angular localization; here E > 0.
  const TrialParams w{0.8, 0.5, 0.4, 0.05};
  const auto sw = SeparableState::ground(w, 4.5, tight());
  const auto ew = expectation_reduced(sw, *angular(4.5), tight());
  CHECK(ew.kinetic == doctest::Approx(0.12301668717265185011).epsilon(1e-11));
  CHECK(ew.potential == doctest::Approx(-0.10109143772492016).epsilon(1e-9));
  CHECK(ew.total == doctest::Approx(0.02192524944773169011).epsilon(1e-8));
}

TEST_CASE("three energy routes agree on random parameters") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double alpha : {2.0, kPi, 4.5}) {
    for (int i = 0; i < 3; ++i) {
      const TrialParams p{0.6 + 2.0 * u(rng), 0.05 + 0.6 * u(rng), 0.2 + 0.7 * u(rng),
                          0.02 + 0.3 * u(rng)};
      const auto s = SeparableState::ground(p, alpha, tight());
      const double reduced = expectation_reduced(s, *angular(alpha), tight()).total;
      CHECK(expectation_oracle_2d(s).total == doctest::Approx(reduced).epsilon(1e-6));
      CHECK(e0_abc_formula(p, *angular(alpha), TanSign::minus, tight()) ==
            doctest::Approx(reduced).epsilon(1e-6));
    }
  }
}

TEST_CASE("plus tan-term sign disagrees with the engine away from p = 0") {
  const TrialParams p{1.2, 0.4, 0.8, 0.05};
  const double reduced = expectation_reduced(SeparableState::ground(p, 2.0, tight()), tight()).total;
  const double plus = e0_abc_formula(p, *angular(2.0), TanSign::plus, tight());
  CHECK(std::abs(plus - reduced) / std::abs(reduced) > 1e-3);
}

TEST_CASE("antisymmetric and excited engines agree with the 2D oracle") {
  const TrialParams p{1.1, 0.3, 0.6, 0.08};
  const TrialParams p0{1.4, 0.35, 0.7, 0.05};
  for (double alpha : {2.0, 4.5}) {
    for (const auto& s : {SeparableState::antisymmetric(p, alpha, tight()),
                          SeparableState::excited(p, p0, alpha, tight())}) {
      const auto r = expectation_reduced(s, tight());
      const auto o = expectation_oracle_2d(s);
      CHECK(o.kinetic == doctest::Approx(r.kinetic).epsilon(1e-7));
      CHECK(o.potential == doctest::Approx(r.potential).epsilon(1e-7));
    }
  }
}

TEST_CASE("scaling covariance under (n, q) -> 2 (n, q)") {
  for (const auto kind : {trial::StateKind::ground, trial::StateKind::antisymmetric}) {
    TrialParams p{1.3, 0.2, 0.75, 0.04};
    const auto e1 = opt::evaluate_point(kind, 3.3, p, nullptr, 1e-12);
    p.n *= 2;
    p.q *= 2;
    const auto e2 = opt::evaluate_point(kind, 3.3, p, nullptr, 1e-12);
    CHECK(e2.kinetic == doctest::Approx(4 * e1.kinetic).epsilon(1e-10));
    CHECK(e2.potential == doctest::Approx(2 * e1.potential).epsilon(1e-10));
  }
}

TEST_CASE("virial residual vanishes at the scaling-optimal point") {
  TrialParams p{1.3, 0.2, 0.75, 0.04};
  const auto e = opt::evaluate_point(trial::StateKind::ground, 2.5, p, nullptr, 1e-12);
  CHECK(e.virial_residual > 1e-2);
  const double lambda = -e.potential / (2 * e.kinetic);
  p.n *= lambda;
  p.q *= lambda;
  const auto s = opt::evaluate_point(trial::StateKind::ground, 2.5, p, nullptr, 1e-12);
  CHECK(s.virial_residual <= 1e-10);
  CHECK(s.total < e.total);
  CHECK(s.total == doctest::Approx(-e.potential * e.potential / (4 * e.kinetic)).epsilon(1e-10));
}

TEST_CASE("planar limit approaches -1/32 Ha from above") {
  // p → 1, q = 0: the state becomes the surface state of each wall.
  TrialParams p{2.0, 0.25, 1.0 - 2e-6 / kPi, 0.0};
  const double e = opt::evaluate_point(trial::StateKind::ground, kPi, p, nullptr, 1e-12).total;
  CHECK(e >= -1.0 / 32.0);
  CHECK(e == doctest::Approx(-1.0 / 32.0).epsilon(1e-6));
}

TEST_CASE("interpolated and direct angular potentials give the same energy") {
  const TrialParams p{1.0, 0.3, 0.6, 0.1};
  const auto s = SeparableState::ground(p, 5.0, tight());
  const potential::AngularPotential direct(5.0, potential::AngularPotential::Mode::direct);
  CHECK(expectation_reduced(s, direct, tight()).total ==
        doctest::Approx(expectation_reduced(s, *angular(5.0), tight()).total).epsilon(1e-10));
}

TEST_CASE("energy breakdown bookkeeping") {
  const auto e = EnergyBreakdown::from_parts(0.5, -0.75);
  CHECK(e.total == doctest::Approx(-0.25));
  CHECK(e.virial_residual == doctest::Approx(1.0));
}
