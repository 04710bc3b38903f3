#include "wedge/trial_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wedge::trial {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const TrialParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "{m=" << p.m << ", n=" << p.n << ", p=" << p.p << ", q=" << p.q << "}";
  return os.str();
}

}  // namespace

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::ground: return "ground";
    case StateKind::antisymmetric: return "antisymmetric";
    case StateKind::excited: return "excited";
  }
  return "unknown";
}

StateKind state_kind_from_index(int index) {
  if (index < 0 || index > 2) throw DomainError("state index must be 0, 1 or 2");
  return static_cast<StateKind>(index);
}

double TrialParams::wall_decay() const {
  // cos(pπ/2) written as sin((1-p)π/2) so that p = 1 gives exactly zero.
  return n * std::sin(0.5 * kPi * (1.0 - p)) + q;
}

void TrialParams::validate() const {
  if (!(m > 0.0) || !(n > 0.0) || !(p > 0.0) || !(p <= 1.0) || !(q >= 0.0) ||
      !std::isfinite(m) || !std::isfinite(n) || !std::isfinite(q))
    throw DomainError("invalid trial parameters " + describe(*this) +
                      ": need m > 0, n > 0, 0 < p <= 1, q >= 0");
  if (!(wall_decay() > 0.0))
    throw NonNormalizableError("trial parameters " + describe(*this) +
                               " are not normalizable: γ vanishes at the wall");
}

double TrialParams::wall_slope() const { return n * p * std::sin(0.5 * kPi * p); }

double gamma_from_wall(const TrialParams& params, double y) {
  // cos(p(π/2 - y)) = sin((1-p)π/2 + py)
  return params.n * std::sin(0.5 * kPi * (1.0 - params.p) + params.p * y) + params.q;
}

double gamma_dx_from_wall(const TrialParams& params, double y) {
  return -params.n * params.p * std::cos(0.5 * kPi * (1.0 - params.p) + params.p * y);
}

std::vector<double> wall_breakpoints(double wall_gamma, double slope, double power) {
  std::vector<double> pts;
  if (!(slope > 0.0) || !(wall_gamma > 0.0)) return pts;
  double y = wall_gamma / (slope * std::max(1.0, power));
  if (!(y < 0.25 * kPi) || !std::isfinite(y)) return pts;
  for (y = std::max(y, 1e-300); y < 0.25 * kPi; y *= 4.0) pts.push_back(y);
  return pts;
}

std::vector<double> wall_breakpoints(const TrialParams& params) {
  return wall_breakpoints(params.wall_decay(), params.wall_slope(), 2.0 * params.m + 2.0);
}

GammaProfile gamma_profile(double theta, const TrialParams& params, double alpha) {
  params.validate();
  const double w = params.p * kPi / alpha;
  const double c = std::cos(w * theta);
  return {params.n * c + params.q, -params.n * w * std::sin(w * theta), -params.n * w * w * c};
}

double radial_moment(double s, double beta) {
  if (!(s > -1.0)) throw DomainError("radial moment needs s > -1");
  if (!(beta > 0.0)) throw DomainError("radial moment needs β > 0");
  return std::exp(numerics::log_gamma(s + 1.0) - (s + 1.0) * std::log(beta));
}

AngularValue AngularFactor::evaluate(double theta) const {
  const double x = scale_ * theta;
  const double s = scale_;
  const double c = coefficient_;
  switch (shape_) {
    case Shape::cos_x: {
      const double cx = std::cos(x);
      return {c * cx, -c * s * std::sin(x), -c * s * s * cx};
    }
    case Shape::sin_2x:
      return {c * std::sin(2.0 * x), 2.0 * c * s * std::cos(2.0 * x),
              -4.0 * c * s * s * std::sin(2.0 * x)};
    case Shape::cos_squared: {
      const double cx = std::cos(x);
      return {c * cx * cx, -c * s * std::sin(2.0 * x), -2.0 * c * s * s * std::cos(2.0 * x)};
    }
  }
  return {0.0, 0.0, 0.0};
}

AngularValue AngularFactor::evaluate_from_wall(double y) const {
  // cos x = sin y, sin x = cos y, sin 2x = sin 2y, cos 2x = -cos 2y
  const double s = scale_;
  const double c = coefficient_;
  switch (shape_) {
    case Shape::cos_x: {
      const double cx = std::sin(y);
      return {c * cx, -c * s * std::cos(y), -c * s * s * cx};
    }
    case Shape::sin_2x:
      return {c * std::sin(2.0 * y), -2.0 * c * s * std::cos(2.0 * y),
              -4.0 * c * s * s * std::sin(2.0 * y)};
    case Shape::cos_squared: {
      const double cx = std::sin(y);
      return {c * cx * cx, -c * s * std::sin(2.0 * y), 2.0 * c * s * s * std::cos(2.0 * y)};
    }
  }
  return {0.0, 0.0, 0.0};
}

double AngularFactor::reduced_from_wall(double y) const {
  switch (shape_) {
    case Shape::cos_x: return coefficient_;
    case Shape::sin_2x: return 2.0 * coefficient_ * std::cos(y);
    case Shape::cos_squared: return coefficient_ * std::sin(y);
  }
  return 0.0;
}

double AngularFactor::reduced(double x) const {
  switch (shape_) {
    case Shape::cos_x: return coefficient_;
    case Shape::sin_2x: return 2.0 * coefficient_ * std::sin(x);
    case Shape::cos_squared: return coefficient_ * std::cos(x);
  }
  return 0.0;
}

namespace detail {

MomentLadder::MomentLadder(double m, double gamma_ref)
    : m_(m),
      log_gamma_ref_(std::log(gamma_ref)),
      log_scale_(numerics::log_gamma(2.0 * m) - 2.0 * m * std::log(2.0 * gamma_ref)) {
  if (!(gamma_ref > 0.0)) throw DomainError("moment ladder needs γ_ref > 0");
}

std::array<double, MomentLadder::kSize> MomentLadder::at(double gamma) const {
  const double b = 2.0 * gamma;
  std::array<double, kSize> out{};
  out[0] = std::exp(2.0 * m_ * (log_gamma_ref_ - std::log(gamma)));
  for (int j = 1; j < kSize; ++j) out[j] = out[j - 1] * (2.0 * m_ + j - 1) / b;
  return out;
}

double log_i_n(int n, const OrthogonalityInputs& in, const QuadratureSpec& spec) {
  if (n < 0) throw DomainError("I_n needs n >= 0");
  const double exponent = in.params0.m + in.params2.m + n;
  // Scaled by the wall value of γ₀ + γ₂, where the integrand peaks.
  const double wall = in.params0.wall_decay() + in.params2.wall_decay();
  if (!(wall > 0.0)) throw NonNormalizableError("I_n diverges: γ₀ + γ₂ vanishes at the wall");
  const double log_wall = std::log(wall);
  auto integrand = [&](double y) {
    const double g = gamma_from_wall(in.params0, y) + gamma_from_wall(in.params2, y);
    return std::pow(std::sin(y), n) * std::exp(-exponent * (std::log(g) - log_wall));
  };
  const auto pts = wall_breakpoints(wall, in.params0.wall_slope() + in.params2.wall_slope(),
                                     exponent);
  auto res = numerics::integrate_interval(integrand, 0.0, 0.5 * kPi, spec, pts);
  std::ostringstream ctx;
  ctx << "I_" << n << " integral";
  const double scaled = res.value_or_throw(ctx.str());
  if (!(scaled > 0.0)) throw QuadratureError(ctx.str() + ": non-positive value");
  return std::log(scaled) - exponent * log_wall;
}

double i_n_unchecked(int n, const OrthogonalityInputs& in, const QuadratureSpec& spec) {
  return std::exp(log_i_n(n, in, spec));
}

}  // namespace detail

double i_n_integral(int n, const OrthogonalityInputs& inputs, const QuadratureSpec& spec) {
  inputs.params0.validate();
  inputs.params2.validate();
  WedgeGeometry{inputs.alpha};
  return detail::i_n_unchecked(n, inputs, spec);
}

double orthogonality_constant(const OrthogonalityInputs& inputs, const QuadratureSpec& spec) {
  inputs.params0.validate();
  inputs.params2.validate();
  WedgeGeometry{inputs.alpha};
  const double ratio =
      std::exp(detail::log_i_n(3, inputs, spec) - detail::log_i_n(2, inputs, spec));
  if (!std::isfinite(ratio)) throw QuadratureError("orthogonality constant: non-finite I₃/I₂");
  return (inputs.params0.m + inputs.params2.m + 2.0) * ratio;
}

SeparableState::SeparableState(StateKind kind, const TrialParams& params, double alpha,
                               std::vector<SeparableTerm> terms, double a,
                               const TrialParams& reference)
    : kind_(kind),
      params_(params),
      alpha_(alpha),
      terms_(std::move(terms)),
      a_(a),
      reference_(reference) {}

SeparableState SeparableState::ground(const TrialParams& params, double alpha,
                                      const QuadratureSpec& spec) {
  params.validate();
  WedgeGeometry{alpha};
  using S = AngularFactor::Shape;
  SeparableState st(StateKind::ground, params, alpha, {{0, AngularFactor(S::cos_x, 1.0, alpha)}},
                    0.0, params);
  st.finalize(spec);
  return st;
}

SeparableState SeparableState::antisymmetric(const TrialParams& params, double alpha,
                                             const QuadratureSpec& spec) {
  params.validate();
  WedgeGeometry{alpha};
  using S = AngularFactor::Shape;
  SeparableState st(StateKind::antisymmetric, params, alpha,
                    {{0, AngularFactor(S::sin_2x, 1.0, alpha)}}, 0.0, params);
  st.finalize(spec);
  return st;
}

SeparableState SeparableState::excited(const TrialParams& params,
                                       const TrialParams& ground_params, double alpha,
                                       const QuadratureSpec& spec) {
  params.validate();
  ground_params.validate();
  WedgeGeometry{alpha};
  const double a = orthogonality_constant({ground_params, params, alpha}, spec);
  using S = AngularFactor::Shape;
  SeparableState st(StateKind::excited, params, alpha,
                    {{0, AngularFactor(S::cos_x, a, alpha)},
                     {1, AngularFactor(S::cos_squared, -1.0, alpha)}},
                    a, ground_params);
  st.finalize(spec);
  return st;
}

void SeparableState::finalize(const QuadratureSpec& spec) {
  phase_ = 1.0;
  log_norm_ = -0.5 * log_unit_norm_integral(spec);
  if (evaluate(kReferenceRadius, 0.25 * alpha_) < 0.0) phase_ = -1.0;
}

double SeparableState::norm_integral(const QuadratureSpec& spec) const {
  return std::exp(2.0 * log_norm_ + log_unit_norm_integral(spec));
}

double SeparableState::log_unit_norm_integral(const QuadratureSpec& spec) const {
  const detail::MomentLadder ladder(params_.m, params_.wall_decay());
  const double scale = kPi / alpha_;
  auto integrand = [&](double y) {
    const auto mom = ladder.at(gamma_from_wall(params_, y));
    double sum = 0.0;
    for (const auto& ti : terms_)
      for (const auto& tj : terms_)
        sum += ti.factor.evaluate_from_wall(y).value * tj.factor.evaluate_from_wall(y).value *
               mom[2 + ti.power_offset + tj.power_offset];
    return sum;
  };
  const auto pts = wall_breakpoints(params_);
  auto res = numerics::integrate_interval(integrand, 0.0, 0.5 * kPi, spec, pts);
  const double scaled = res.value_or_throw("norm integral");
  if (!(scaled > 0.0) || !std::isfinite(scaled))
    throw NonNormalizableError("state norm integral is not finite and positive");
  // θ = (α/π)x and both halves of the opening contribute equally.
  return std::log(2.0 / scale * scaled) + ladder.log_scale();
}

namespace {

// ∫∫ (a/N_a)(b/N_b) r dr dθ over the full opening, returned as {value, ln scale}
// with the true integral equal to value·e^scale. The radial part is
// ∫ r^(M+1+d) e^{-Gr} dr = Γ(M+2+d)/G^(M+2+d), G = γ_a + γ_b.
struct ScaledIntegral {
  double value;
  double log_scale;
};

ScaledIntegral pair_integral(const SeparableState& a, const SeparableState& b,
                             const QuadratureSpec& spec) {
  const double s = kPi / a.alpha();
  const double big_m = a.params().m + b.params().m;
  const double wall = a.params().wall_decay() + b.params().wall_decay();
  const double log_wall = std::log(wall);
  auto integrand = [&](double y) {
    const double lg = std::log(gamma_from_wall(a.params(), y) + gamma_from_wall(b.params(), y)) -
                      log_wall;
    double sum = 0.0;
    for (const auto& ta : a.terms())
      for (const auto& tb : b.terms()) {
        const int d = ta.power_offset + tb.power_offset;
        sum += ta.factor.evaluate_from_wall(y).value * tb.factor.evaluate_from_wall(y).value *
               std::exp(numerics::log_gamma(big_m + 2.0 + d) - (big_m + 2.0 + d) * lg -
                        d * log_wall);
      }
    return sum;
  };
  const auto pts = wall_breakpoints(wall, a.params().wall_slope() + b.params().wall_slope(),
                                    big_m + 2.0);
  const double v = numerics::integrate_interval(integrand, 0.0, 0.5 * kPi, spec, pts)
                       .value_or_throw("overlap integral");
  return {v, -(big_m + 2.0) * log_wall + std::log(2.0 / s)};
}

}  // namespace

double overlap(const SeparableState& a, const SeparableState& b, const QuadratureSpec& spec) {
  if (a.alpha() != b.alpha()) throw DomainError("overlap of states on different wedges");
  if (a.parity() != b.parity()) return 0.0;
  return 2.0 * upper_half_overlap(a, b, spec);
}

double upper_half_overlap(const SeparableState& a, const SeparableState& b,
                          const QuadratureSpec& spec) {
  if (a.alpha() != b.alpha()) throw DomainError("overlap of states on different wedges");
  const ScaledIntegral aa = pair_integral(a, a, spec);
  const ScaledIntegral bb = pair_integral(b, b, spec);
  // The cross term may vanish by construction; its tolerance is set against
  // √(⟨a|a⟩⟨b|b⟩) on the same scale.
  QuadratureSpec cross = spec;
  const double big_m = a.params().m + b.params().m;
  const double log_cross_scale =
      -(big_m + 2.0) * std::log(a.params().wall_decay() + b.params().wall_decay()) +
      std::log(2.0 * a.alpha() / kPi);
  const double log_ref =
      0.5 * (std::log(aa.value) + aa.log_scale + std::log(bb.value) + bb.log_scale);
  cross.absolute_tolerance =
      std::max(spec.relative_tolerance * std::exp(log_ref - log_cross_scale), 1e-300);
  const ScaledIntegral ab = pair_integral(a, b, cross);
  // pair_integral doubles for the two halves of the opening.
  const double log_pref = a.log_normalization() + b.log_normalization() + ab.log_scale;
  return 0.5 * a.phase() * b.phase() * ab.value * std::exp(log_pref);
}

double normalization(const SeparableState& draft, const QuadratureSpec& spec) {
  return std::exp(-0.5 * draft.log_unit_norm_integral(spec));
}

double detail::log_ground_normalization(const TrialParams& params, double alpha,
                                        const QuadratureSpec& spec) {
  params.validate();
  WedgeGeometry{alpha};
  const TrialParams formal{params.m, 0.0, 0.0, 0.0};
  const double log_i2 = detail::log_i_n(2, {params, formal, alpha}, spec);
  const double m = params.m;
  const double log_num = (2.0 * m + 1.0) * std::log(2.0) + std::log(kPi / alpha);
  const double log_den = numerics::log_gamma(2.0 * m + 2.0) + log_i2;
  return 0.5 * (log_num - log_den);
}

double ground_normalization_closed_form(const TrialParams& params, double alpha,
                                        const QuadratureSpec& spec) {
  return std::exp(detail::log_ground_normalization(params, alpha, spec));
}

void SeparableState::check_domain(double r, double theta) const {
  if (!(r > 0.0)) throw DomainError("wavefunction evaluated at r <= 0");
  if (std::abs(theta) > 0.5 * alpha_ * (1.0 + 1e-14))
    throw DomainError("wavefunction evaluated inside the material");
}

double SeparableState::evaluate(double r, double theta, double log_offset) const {
  check_domain(r, theta);
  const double m = params_.m;
  const double w = params_.p * kPi / alpha_;
  const double g = params_.n * std::cos(w * theta) + params_.q;
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.factor.evaluate(theta).value * std::pow(r, t.power_offset);
  return phase_ * sum * std::exp(log_norm_ - log_offset + m * std::log(r) - g * r);
}

Derivatives SeparableState::evaluate_derivatives(double r, double theta,
                                                 double log_offset) const {
  check_domain(r, theta);
  const double m = params_.m;
  const GammaProfile gp = gamma_profile(theta, params_, alpha_);
  const double e = std::exp(log_norm_ - log_offset + m * std::log(r) - gp.value * r);
  Derivatives d{0.0, 0.0, 0.0, 0.0, 0.0};
  for (const auto& t : terms_) {
    const AngularValue v = t.factor.evaluate(theta);
    const double mu = m + t.power_offset;
    const double rp = std::pow(r, t.power_offset);
    const double g = gp.value;
    d.psi += v.value * rp;
    d.dr += v.value * (mu / r - g) * rp;
    d.dr2 += v.value * (mu * (mu - 1.0) / (r * r) - 2.0 * g * mu / r + g * g) * rp;
    d.dtheta += (v.d1 - v.value * gp.d1 * r) * rp;
    d.dtheta2 += (v.d2 - 2.0 * v.d1 * gp.d1 * r - v.value * gp.d2 * r +
                  v.value * gp.d1 * gp.d1 * r * r) *
                 rp;
  }
  const double scale = phase_ * e;
  d.psi *= scale;
  d.dr *= scale;
  d.dr2 *= scale;
  d.dtheta *= scale;
  d.dtheta2 *= scale;
  return d;
}

}  // namespace wedge::trial
