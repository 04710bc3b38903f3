#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wedge/degeneracy.hpp"

using namespace wedge;
using namespace wedge::degeneracy;

namespace {

SweepRecord record(double alpha, double gap, bool ok = true) {
  SweepRecord r;
  r.alpha = alpha;
  r.energy = {-0.03, -0.03 + gap, -0.01};
  r.gap01 = gap;
  r.ok = ok;
  return r;
}

numerics::QuadratureSpec null_spec() {
  numerics::QuadratureSpec s;
  s.absolute_tolerance = 1e-14;
  return s;
}

}  // namespace

TEST_CASE("analytic channel state: splitting is a total derivative and vanishes") {
  for (double alpha : {2.0, 3.5, 5.0}) {
    const auto st = analytic_channel_state(alpha);
    CHECK(std::abs(bisector_splitting(st, null_spec()).value) <= 1e-10);
    CHECK(std::isnan(st.upper_mass));
  }
  CHECK_THROWS_AS(analytic_channel_state(2 * std::numbers::pi), DomainError);
}

TEST_CASE("a state with zero bisector gradient has zero splitting") {
  const auto s = trial::SeparableState::ground({1.2, 0.3, 0.7, 0.05}, 3.5);
  CHECK(bisector_splitting(field_of(s, 0.0), null_spec()).value == 0.0);
}

TEST_CASE("current residual: identically zero for psi(+-) = psi_L") {
  const auto s = trial::SeparableState::ground({1.2, 0.3, 0.7, 0.05}, 3.5);
  const auto f = field_of(s, s.log_normalization());
  const auto cr = current_residual(f, f, -0.02, -0.02, PolarGrid{12, 10, 20.0});
  CHECK(cr.residual.size() == 120u);
  for (double v : cr.residual) CHECK(v == 0.0);
  CHECK(cr.integrated_residual == 0.0);
}

TEST_CASE("current residual: divergence telescopes to the boundary fluxes") {
  const auto g = trial::SeparableState::ground({1.2, 0.4, 0.7, 0.1}, 2.5);
  const auto a = trial::SeparableState::antisymmetric({1.0, 0.35, 0.6, 0.12}, 2.5);
  const auto cr = current_residual(field_of(a, 0.0), field_of(g, 0.0), -0.03, -0.033,
                                   PolarGrid{64, 64, 40.0});
  CHECK(cr.volume_divergence ==
        doctest::Approx(cr.line_term + cr.outer_flux).epsilon(2e-3));
  CHECK_THROWS_AS(current_residual(field_of(a, 0.0), field_of(g, 0.0), 0, 0, PolarGrid{3, 8, 10}),
                  DomainError);
}

TEST_CASE("single-well state from a variational pair") {
  opt::OptimizerConfig c;
  c.restarts = 4;
  const auto g = opt::optimize_state(trial::StateKind::ground, 2.0, c);
  const auto a = opt::optimize_state(trial::StateKind::antisymmetric, 2.0, c);
  const auto w = single_well_from_pair(g, a);
  CHECK(w.upper_mass + w.lower_mass == doctest::Approx(1.0));
  CHECK(w.upper_mass >= w.lower_mass);
  const auto sp = bisector_splitting(w);
  CHECK(std::isfinite(sp.log10_abs));
  CHECK_THROWS_AS(single_well_from_pair(a, g), DomainError);
  auto other = a;
  other.alpha = 2.1;
  CHECK_THROWS_AS(single_well_from_pair(g, other), DomainError);
}

TEST_CASE("degeneracy onset") {
  std::vector<SweepRecord> recs = {record(1.0, 0.01), record(2.0, 1e-4), record(3.0, 1e-6),
                                   record(4.0, 1e-7)};
  CHECK(degeneracy_onset(recs, 1e-3).value() == 2.0);
  CHECK(degeneracy_onset(recs, 1e-5).value() == 3.0);
  CHECK_FALSE(degeneracy_onset(recs, 1e-9).has_value());
  CHECK_FALSE(degeneracy_onset(recs, 0.0).has_value());
  recs[3].ok = false;
  CHECK_FALSE(degeneracy_onset(recs, 1e-3).has_value());
  std::swap(recs[0], recs[1]);
  CHECK_THROWS(degeneracy_onset(recs, 1e-3));
}

TEST_CASE("ordering violation aborts") {
  CHECK_NOTHROW(check_ordering({record(1.0, 0.0), record(2.0, -5e-10)}));
  CHECK_THROWS_AS(check_ordering({record(1.0, -1e-6)}), OptimizationError);
  // Failed rows are not ordered.
  CHECK_NOTHROW(check_ordering({record(1.0, -1e-6, false)}));
}

TEST_CASE("sweep over two angles") {
  opt::OptimizerConfig c;
  c.restarts = 3;
  const auto recs = sweep({2.0, 4.0}, c);
  REQUIRE(recs.size() == 2u);
  for (const auto& r : recs) {
    CHECK(r.ok);
    CHECK(r.energy[0] <= r.energy[1] + kOrderingTolerance);
    CHECK(r.energy[0] >= -1.0 / 32.0 - 0.01);
    CHECK(r.results.size() == 3u);
  }
  CHECK(recs[0].alpha == 2.0);
  CHECK(std::abs(recs[1].gap01) <= 1e-9);
}
