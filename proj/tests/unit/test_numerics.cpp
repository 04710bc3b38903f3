#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wedge/numerics.hpp"

using namespace wedge;
using namespace wedge::numerics;

TEST_CASE("Gauss-Kronrod integrates polynomials and smooth functions") {
  QuadratureSpec spec;
  auto r = integrate_interval([](double x) { return 3 * x * x + 1; }, 0.0, 2.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(10.0).epsilon(1e-14));
  auto s = integrate_interval([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, spec);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("breakpoints resolve a narrow spike the plain rule would miss") {
  QuadratureSpec spec;
  spec.relative_tolerance = 1e-12;
  spec.absolute_tolerance = 1e-300;
  spec.max_subdivisions = 2000;
  const double w = 1e-7;
  auto f = [w](double x) { return std::exp(-x / w) / w; };  // ∫₀¹ = 1 - e^{-1/w}
  const std::vector<double> bp = {w, 4 * w, 16 * w, 64 * w, 256 * w};
  auto r = integrate_interval(f, 0.0, 1.0, spec, bp);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("inverse square-root endpoint handled by the sqrt map") {
  QuadratureSpec spec;
  auto r = integrate_unit([](double x) { return 1.0 / std::sqrt(x); },
                          spec.with_hint(EndpointHint::inverse_sqrt_at_zero));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("semi-infinite integrals and the slow-decay guard") {
  QuadratureSpec spec;
  auto r = integrate_semi_infinite([](double x) { return x * x * std::exp(-x); }, spec, 1.0);
  CHECK(r.value_or_throw("gamma(3)") == doctest::Approx(2.0).epsilon(1e-10));
  auto slow = integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, spec, 1.0);
  CHECK_FALSE(slow.converged);
  CHECK_THROWS_AS(slow.value_or_throw("lorentzian"), QuadratureError);
  CHECK_THROWS_AS(integrate_semi_infinite([](double) { return 0.0; }, spec, 0.0), DomainError);
}

TEST_CASE("non-finite integrands are reported, not summed") {
  QuadratureSpec spec;
  auto r = integrate_interval([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, spec);
  // 0.5 is the centre node of the first segment.
  CHECK_FALSE(r.converged);
  CHECK(r.failure.find("non-finite") != std::string::npos);
}

TEST_CASE("vector integration agrees with scalar integration") {
  QuadratureSpec spec;
  auto v = integrate_interval_vec<2>(
      [](double x) { return detail::Vec<2>{std::exp(x), x * x}; }, 0.0, 1.0, spec);
  CHECK(v.value[0] == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  CHECK(v.value[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("log-gamma") {
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-15));
  CHECK(log_gamma(1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec bad;
  bad.relative_tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = QuadratureSpec{};
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
