#include "wedge/potential.hpp"

#include "wedge/parallel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wedge {

WedgeGeometry::WedgeGeometry(double alpha, double material_contrast, double outer_permittivity)
    : alpha_(alpha) {
  if (!(alpha > 0.0) || alpha > 2.0 * std::numbers::pi + 1e-12) {
    std::ostringstream os;
    os << "wedge opening angle must lie in (0, 2π], got " << alpha;
    throw DomainError(os.str());
  }
  if (material_contrast != 1.0 || outer_permittivity != 1.0)
    throw DomainError("only the perfectly polarizable limit (contrast 1, outer permittivity 1) "
                      "is supported");
}

}  // namespace wedge

namespace wedge::potential {

namespace {

constexpr double kPi = std::numbers::pi;

// 1 - e^{-aL}
inline double one_minus_pow(double a, double L) { return -std::expm1(-a * L); }

// Taylor coefficients of the k numerator in L = -ln η. The L and L² orders
// vanish identically; c_k for k >= 3 is
//   (-1)^{k+1}/k! · α(s+1) · Σ_{j=1}^{k-1} s^j [C(k-1, j-1) - C(k-1, j)].
struct KSeries {
  static constexpr int kTerms = 34;
  std::array<double, kTerms + 1> coeff{};

  explicit KSeries(double alpha) {
    const double s = kPi / alpha;
    std::array<double, kTerms + 1> binom{};  // row k-1 of Pascal's triangle
    double factorial = 2.0;
    for (int k = 3; k <= kTerms; ++k) {
      factorial *= k;
      const int n = k - 1;
      binom.fill(0.0);
      binom[0] = 1.0;
      for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) binom[j] += binom[j - 1];
      double poly = 0.0;
      for (int j = n; j >= 1; --j) poly = (poly + (binom[j - 1] - binom[j])) * s;
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      coeff[k] = sign * alpha * (s + 1.0) * poly / factorial;
    }
  }

  // numerator / L³
  double reduced(double L) const {
    double sum = 0.0;
    for (int k = kTerms; k >= 3; --k) sum = sum * L + coeff[k];
    return sum;
  }
};

double k_integrand_impl(double eta, double alpha, const KSeries& series) {
  const double s = kPi / alpha;
  const double L = -std::log(eta);
  if (L == 0.0) return (kPi * kPi - alpha * alpha) / (6.0 * alpha);
  if ((s + 1.0) * L < 1.0) {
    // Numerator and denominator both O(L³); divide it out analytically.
    const double e1 = one_minus_pow(1.0, L) / L;
    const double es = one_minus_pow(s, L) / L;
    return series.reduced(L) * std::exp(0.5 * L) / (e1 * e1 * es);
  }
  const double e1 = one_minus_pow(1.0, L);
  const double es = one_minus_pow(s, L);
  const double es1 = one_minus_pow(s + 1.0, L);
  // η - η^s = (1 - η^s) - (1 - η)
  const double num = (kPi - alpha) * es1 - (kPi + alpha) * (es - e1);
  return num * std::exp(0.5 * L) / (e1 * e1 * es);
}

// cos²(πθ/α) supplied directly so callers near the wall can pass it without
// rounding through θ.
double f_integrand_L(double L, double cos2, double s) {
  if (L == 0.0) return s / (2.0 * cos2);
  // (1 - η^{2s})/(1 - η) and the denominator 1 + η^{2s} + 2η^s cos(2x)
  // rewritten as (1 - η^s)² + 4η^s cos²x: no cancellation anywhere.
  const double ratio = one_minus_pow(2.0 * s, L) / one_minus_pow(1.0, L);
  const double es = one_minus_pow(s, L);
  const double den = es * es + 4.0 * std::exp(-s * L) * cos2;
  return std::exp(0.5 * L) * ratio / den;
}

double f_integrand_cos2(double eta, double cos2, double s) {
  return f_integrand_L(-std::log(eta), cos2, s);
}

double f_from_cos(double c, double alpha, const QuadratureSpec& spec) {
  const double s = kPi / alpha;
  const double cos2 = c * c;
  std::ostringstream ctx;
  ctx.precision(17);
  ctx << "f profile (cos(πθ/α) = " << c << ", α = " << alpha << ")";
  if (c >= 1e-3) {
    auto qs = spec.with_hint(numerics::EndpointHint::both);
    auto res = numerics::integrate_unit(
        [&](double eta) { return f_integrand_cos2(eta, cos2, s); }, qs);
    return (2.0 / alpha) * res.value_or_throw(ctx.str());
  }
  // Near the wall the integrand is a Lorentzian of width 2c/s in L = -ln η,
  // which η cannot resolve. Integrate L in [0, 1] directly and the rest in η.
  const double peak = 2.0 * c / s;
  const std::array<double, 2> bp{peak, 10.0 * peak};
  auto head = numerics::integrate_interval(
      [&](double L) { return f_integrand_L(L, cos2, s) * std::exp(-L); }, 0.0, 1.0, spec, bp);
  const double e1 = std::exp(-1.0);
  auto tail = numerics::integrate_unit(
      [&](double t) { return e1 * f_integrand_cos2(e1 * t, cos2, s); },
      spec.with_hint(numerics::EndpointHint::inverse_sqrt_at_zero));
  return (2.0 / alpha) * (head.value_or_throw(ctx.str()) + tail.value_or_throw(ctx.str()));
}

}  // namespace

QuadratureSpec kernel_spec() {
  QuadratureSpec s;
  s.relative_tolerance = 1e-12;
  s.absolute_tolerance = 1e-15;
  s.max_subdivisions = 2000;
  return s;
}

namespace detail {

double k_integrand(double eta, double alpha) { return k_integrand_impl(eta, alpha, KSeries(alpha)); }

double f_integrand(double eta, double theta, double alpha) {
  const double c = std::cos(kPi * theta / alpha);
  return f_integrand_cos2(eta, c * c, kPi / alpha);
}

double k_integrand_limit(double alpha) { return (kPi * kPi - alpha * alpha) / (6.0 * alpha); }

double f_integrand_limit(double theta, double alpha) {
  const double c = std::cos(kPi * theta / alpha);
  return (kPi / alpha) / (2.0 * c * c);
}

}  // namespace detail

double k_coefficient(double alpha, const QuadratureSpec& spec) {
  WedgeGeometry{alpha};
  const KSeries series(alpha);
  auto res = numerics::integrate_unit(
      [&](double eta) { return k_integrand_impl(eta, alpha, series); },
      spec.with_hint(numerics::EndpointHint::both));
  std::ostringstream ctx;
  ctx.precision(17);
  ctx << "k coefficient (α = " << alpha << ")";
  return (2.0 / (alpha * kPi)) * res.value_or_throw(ctx.str());
}

double f_profile(double theta, double alpha, const QuadratureSpec& spec) {
  WedgeGeometry geometry{alpha};
  if (!(std::abs(theta) < geometry.half_angle())) {
    std::ostringstream os;
    os << "θ = " << theta << " is on or inside the material (|θ| >= α/2 = "
       << geometry.half_angle() << ")";
    throw DomainError(os.str());
  }
  return f_from_cos(std::cos(kPi * theta / alpha), alpha, spec);
}

double wall_weighted_profile(double x, double alpha, const QuadratureSpec& spec) {
  const double s = kPi / alpha;
  const double ax = std::abs(x);
  if (ax > 0.5 * kPi) throw DomainError("reduced angle outside [-π/2, π/2]");
  // sin(π/2 - |x|) keeps full relative precision of the small cosine near
  // the wall.
  const double c = std::sin(0.5 * kPi - ax);
  if (c < 1e-10) return s;
  return f_from_cos(c, alpha, spec) * c;
}

double image_potential_energy(double r, double theta, const WedgeGeometry& geometry,
                              const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw DomainError("radial coordinate must be positive");
  const double f = f_profile(theta, geometry.alpha(), spec);
  const double k = PotentialCache::global().k(geometry.alpha(), spec);
  return (k - f) / (4.0 * r);
}

double image_oracle(double r, double theta, int n) {
  if (n < 1) throw DomainError("image construction needs n >= 1");
  if (!(r > 0.0)) throw DomainError("radial coordinate must be positive");
  const double wedge = kPi / n;
  if (!(std::abs(theta) < 0.5 * wedge)) throw DomainError("point outside the π/n opening");
  // Angle of the source measured from the lower wall.
  const double phi0 = theta + 0.5 * wedge;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double base = 2.0 * k * wedge;
    if (k != 0) sum += 1.0 / (2.0 * r * std::abs(std::sin(0.5 * base)));
    const double mirrored = base - 2.0 * phi0;  // image at base - φ0, relative angle
    sum -= 1.0 / (2.0 * r * std::abs(std::sin(0.5 * mirrored)));
  }
  return 0.5 * sum;
}

AngularPotential::AngularPotential(double alpha, Mode mode, const QuadratureSpec& spec,
                                   int chebyshev_order)
    : alpha_(alpha), k_(k_coefficient(alpha, spec)), mode_(mode), spec_(spec) {
  if (mode_ != Mode::interpolated) return;
  const int m = chebyshev_order + (chebyshev_order % 2);
  nodes_.resize(m + 1);
  values_.resize(m + 1);
  weights_.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    nodes_[j] = 0.5 * kPi * std::cos(kPi * j / m);
    weights_[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == m) ? 0.5 : 1.0);
  }
  // w is even: evaluate the non-negative half and mirror.
  for (int j = 0; j <= m / 2; ++j) {
    values_[j] = (j == 0) ? kPi / alpha : wall_weighted_profile(nodes_[j], alpha, spec);
    values_[m - j] = values_[j];
  }
}

double AngularPotential::w(double x) const {
  if (mode_ == Mode::direct) return wall_weighted_profile(x, alpha_, spec_);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double d = x - nodes_[j];
    if (d == 0.0) return values_[j];
    const double t = weights_[j] / d;
    num += t * values_[j];
    den += t;
  }
  return num / den;
}

double AngularPotential::g(double x) const { return k_ - w(x) / std::cos(x); }

std::shared_ptr<const AngularPotential> PotentialCache::get(double alpha,
                                                            AngularPotential::Mode mode,
                                                            const QuadratureSpec& spec) {
  const auto key = std::make_pair(alpha, static_cast<int>(mode));
  {
    std::shared_lock lock(mutex_);
    if (auto it = angular_.find(key); it != angular_.end()) return it->second;
  }
  auto built = std::make_shared<const AngularPotential>(alpha, mode, spec);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = angular_.emplace(key, std::move(built));
  return it->second;
}

double PotentialCache::k(double alpha, const QuadratureSpec& spec) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = k_.find(alpha); it != k_.end()) return it->second;
  }
  const double value = k_coefficient(alpha, spec);
  std::unique_lock lock(mutex_);
  return k_.emplace(alpha, value).first->second;
}

PotentialCache& PotentialCache::global() {
  static PotentialCache cache;
  return cache;
}

FieldGrid potential_grid(const WedgeGeometry& geometry, const GridRequest& request,
                         Execution exec, const QuadratureSpec& spec) {
  if (request.radial_count < 2 || request.angular_count < 2)
    throw DomainError("grid counts must be >= 2");
  if (!(request.r_max > 0.0)) throw DomainError("grid r_max must be positive");

  FieldGrid grid;
  grid.alpha = geometry.alpha();
  const int nr = request.radial_count;
  const int nt = request.angular_count;
  grid.radial_nodes.resize(nr);
  grid.angular_nodes.resize(nt);
  for (int i = 0; i < nr; ++i) grid.radial_nodes[i] = request.r_max * (i + 1) / nr;
  for (int j = 0; j < nt; ++j) grid.angular_nodes[j] = -kPi + 2.0 * kPi * (j + 0.5) / nt;

  const double k = PotentialCache::global().k(geometry.alpha(), spec);
  // f depends on θ only; one quadrature per angular column.
  std::vector<double> f(nt, std::numeric_limits<double>::quiet_NaN());
  auto column = [&](int j) {
    const double theta = grid.angular_nodes[j];
    if (std::abs(theta) < geometry.half_angle()) f[j] = f_profile(theta, geometry.alpha(), spec);
  };
  for_each_index(nt, exec, column);

  grid.values.assign(static_cast<std::size_t>(nr) * nt, std::numeric_limits<double>::quiet_NaN());
  grid.inside.assign(static_cast<std::size_t>(nr) * nt, 0);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      if (!geometry.inside(grid.radial_nodes[i], grid.angular_nodes[j])) continue;
      const std::size_t idx = static_cast<std::size_t>(i) * nt + j;
      grid.inside[idx] = 1;
      grid.values[idx] = (k - f[j]) / (4.0 * grid.radial_nodes[i]);
    }
  }
  return grid;
}

}  // namespace wedge::potential
