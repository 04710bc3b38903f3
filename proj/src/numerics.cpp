#include "wedge/numerics.hpp"

#include <cmath>

namespace wedge::numerics {

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0))
    throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

double QuadratureResult::value_or_throw(const std::string& context) const {
  if (!converged) throw QuadratureError(context + ": " + failure);
  return value;
}

namespace {

QuadratureResult scalar(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                        std::span<const double> breakpoints = {}) {
  auto vf = [&f](double x) { return detail::Vec<1>{f(x)}; };
  const auto r = integrate_interval_vec<1>(vf, a, b, spec, breakpoints);
  return {r.value[0], r.error_estimate[0], r.evaluations, r.converged, r.failure};
}

bool wants_sqrt_map(EndpointHint h) {
  return h == EndpointHint::inverse_sqrt_at_zero || h == EndpointHint::both;
}

}  // namespace

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec,
                                    std::span<const double> breakpoints) {
  return scalar(f, a, b, spec, breakpoints);
}

QuadratureResult integrate_unit(const Integrand& f, const QuadratureSpec& spec) {
  if (wants_sqrt_map(spec.endpoint_hint)) {
    // η = t², dη = 2t dt
    return scalar([&f](double t) { return 2.0 * t * f(t * t); }, 0.0, 1.0, spec);
  }
  return scalar(f, 0.0, 1.0, spec);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                         double decay_rate) {
  auto vf = [&f](double r) { return detail::Vec<1>{f(r)}; };
  const auto r = integrate_semi_infinite_vec<1>(vf, spec, decay_rate);
  return {r.value[0], r.error_estimate[0], r.evaluations, r.converged, r.failure};
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "log_gamma requires x > 0, got " << x;
    throw DomainError(os.str());
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

}  // namespace wedge::numerics
