#pragma once

// Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals,
// plus the log-gamma function. Everything here is a pure function of its
// arguments and may be called concurrently.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "wedge/errors.hpp"

namespace wedge::numerics {

enum class EndpointHint { none, inverse_sqrt_at_zero, removable_at_one, both };

struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-14;
  int max_subdivisions = 400;
  EndpointHint endpoint_hint = EndpointHint::none;

  void validate() const;
  QuadratureSpec with_hint(EndpointHint h) const {
    QuadratureSpec s = *this;
    s.endpoint_hint = h;
    return s;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
  std::string failure;  // empty when converged

  // Returns value, or throws QuadratureError tagged with `context`.
  double value_or_throw(const std::string& context) const;
};

using Integrand = std::function<double(double)>;

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec,
                                    std::span<const double> breakpoints = {});

// ∫_0^1 f(η) dη. With an inverse_sqrt_at_zero hint the rule runs in t = √η,
// which turns an η^(-1/2) endpoint into a smooth one. Nodes never touch the
// endpoints, so integrands with a removable limit at η = 1 are only required
// to be stable near (not at) 1.
QuadratureResult integrate_unit(const Integrand& f, const QuadratureSpec& spec);

// ∫_0^∞ f(r) dr through r = -ln(u)/decay_rate. `decay_rate` should be of the
// order of the integrand's exponential decay constant.
QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                         double decay_rate = 1.0);

// ln Γ(x) for x > 0.
double log_gamma(double x);

namespace detail {

// Gauss-Kronrod 10/21 point nodes and weights (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Segment {
  double a, b;
  Vec<N> value, error;
  double priority;  // largest component error
  bool operator<(const Segment& o) const { return priority < o.priority; }
};

template <std::size_t N>
inline bool finite_all(const Vec<N>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

template <std::size_t N, class F>
Segment<N> gk21(const F& f, double a, double b, long& evals, std::string& failure) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Vec<N> fc = f(centre);
  Vec<N> resk{}, resg{};
  auto check = [&](const Vec<N>& v, double x) {
    if (failure.empty() && !finite_all(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "non-finite integrand at abscissa " << x;
      failure = os.str();
    }
  };
  check(fc, centre);
  for (std::size_t c = 0; c < N; ++c) resk[c] = fc[c] * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const Vec<N> f1 = f(centre - dx);
    const Vec<N> f2 = f(centre + dx);
    check(f1, centre - dx);
    check(f2, centre + dx);
    for (std::size_t c = 0; c < N; ++c) {
      const double sum = f1[c] + f2[c];
      resk[c] += kWgk[j] * sum;
      if (j % 2 == 1) resg[c] += kWg[j / 2] * sum;
    }
  }
  evals += 21;
  Segment<N> s{a, b, {}, {}, 0.0};
  for (std::size_t c = 0; c < N; ++c) {
    s.value[c] = resk[c] * half;
    s.error[c] = std::abs((resk[c] - resg[c]) * half);
    s.priority = std::max(s.priority, s.error[c]);
  }
  return s;
}

// Globally adaptive bisection; converged when every component satisfies
// err_c <= max(rel * |I_c|, abs).
template <std::size_t N, class F>
void adaptive(const F& f, double a, double b, const QuadratureSpec& spec, Vec<N>& value,
              Vec<N>& error, long& evals, bool& converged, std::string& failure,
              std::span<const double> breakpoints = {}) {
  evals = 0;
  converged = false;
  std::priority_queue<Segment<N>> heap;
  value = {};
  error = {};
  double left_end = a;
  int subdivisions = 0;
  auto seed = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    const Segment<N> s = gk21<N>(f, lo, hi, evals, failure);
    for (std::size_t c = 0; c < N; ++c) {
      value[c] += s.value[c];
      error[c] += s.error[c];
    }
    heap.push(s);
    ++subdivisions;
  };
  for (double p : breakpoints) {
    if (p > left_end && p < b) {
      seed(left_end, p);
      left_end = p;
    }
  }
  seed(left_end, b);
  auto done = [&]() {
    for (std::size_t c = 0; c < N; ++c) {
      const double target =
          std::max(spec.relative_tolerance * std::abs(value[c]), spec.absolute_tolerance);
      if (!(error[c] <= target)) return false;
    }
    return true;
  };
  while (failure.empty() && !done()) {
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream os;
      os << "no convergence after " << subdivisions << " subdivisions on [" << a << ", " << b
         << "], worst segment [" << heap.top().a << ", " << heap.top().b << "]";
      failure = os.str();
      break;
    }
    Segment<N> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      failure = "interval collapsed below machine resolution";
      heap.push(worst);
      break;
    }
    const Segment<N> left = gk21<N>(f, worst.a, mid, evals, failure);
    const Segment<N> right = gk21<N>(f, mid, worst.b, evals, failure);
    for (std::size_t c = 0; c < N; ++c) {
      value[c] += left.value[c] + right.value[c] - worst.value[c];
      error[c] += left.error[c] + right.error[c] - worst.error[c];
    }
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Final totals are re-summed so accumulated rounding in the running sums
  // cannot leak into the reported value.
  value = {};
  error = {};
  while (!heap.empty()) {
    const auto& s = heap.top();
    for (std::size_t c = 0; c < N; ++c) {
      value[c] += s.value[c];
      error[c] += s.error[c];
    }
    heap.pop();
  }
  converged = failure.empty();
}

}  // namespace detail

// Vector-valued adaptive integration over [a, b]; `f` returns std::array<double, N>.
template <std::size_t N>
struct VectorQuadratureResult {
  detail::Vec<N> value{};
  detail::Vec<N> error_estimate{};
  long evaluations = 0;
  bool converged = false;
  std::string failure;

  const detail::Vec<N>& value_or_throw(const std::string& context) const {
    if (!converged) throw QuadratureError(context + ": " + failure);
    return value;
  }
};

// Optional interior `breakpoints` (ascending) seed the initial partition, for
// integrands with a known narrow feature.
template <std::size_t N, class F>
VectorQuadratureResult<N> integrate_interval_vec(const F& f, double a, double b,
                                                 const QuadratureSpec& spec,
                                                 std::span<const double> breakpoints = {}) {
  spec.validate();
  VectorQuadratureResult<N> r;
  detail::adaptive<N>(f, a, b, spec, r.value, r.error_estimate, r.evaluations, r.converged,
                      r.failure, breakpoints);
  return r;
}

// Vector-valued counterpart of integrate_semi_infinite, same r = -ln(u)/β map
// and divergence guard.
template <std::size_t N, class F>
VectorQuadratureResult<N> integrate_semi_infinite_vec(const F& f, const QuadratureSpec& spec,
                                                      double decay_rate) {
  if (!(decay_rate > 0.0) || !std::isfinite(decay_rate))
    throw DomainError("decay_rate must be positive and finite");
  const double beta = decay_rate;
  auto mapped = [&f, beta](double u) {
    const double r = -std::log(u) / beta;
    detail::Vec<N> v = f(r);
    const double jac = 1.0 / (beta * u);
    for (auto& x : v) x = (x == 0.0) ? 0.0 : x * jac;
    return v;
  };
  auto res = integrate_interval_vec<N>(mapped, 0.0, 1.0, spec);
  if (res.converged) {
    // At r = 600/β an integrand decaying at the declared rate is below
    // 1e-250; r·|f(r)| there bounds the mass the map could be hiding.
    const double r_far = 600.0 / beta;
    const detail::Vec<N> far = f(r_far);
    for (std::size_t c = 0; c < N; ++c) {
      const double tail = std::abs(far[c]) * r_far;
      const double tol = std::max(spec.relative_tolerance * std::abs(res.value[c]),
                                  spec.absolute_tolerance);
      if (!std::isfinite(tail) || tail > tol) {
        res.converged = false;
        std::ostringstream os;
        os << "integrand does not decay fast enough: tail estimate " << tail
           << " exceeds tolerance " << tol;
        res.failure = os.str();
        break;
      }
    }
  }
  return res;
}

}  // namespace wedge::numerics
