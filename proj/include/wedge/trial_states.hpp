#pragma once

// Trial wavefunctions for the three lowest wedge states:
//
//   ground         ψ₀ = N₀ r^m  cos(x)                e^{-γ(θ) r}
//   antisymmetric  ψ₁ = N₁ r^m  sin(2x)               e^{-γ(θ) r}
//   excited        ψ₂ = N₂ r^m (a - r cos x) cos(x)   e^{-γ(θ) r}
//
// with x = πθ/α and γ(θ) = n cos(pπθ/α) + q. Every state is stored as a
// separable sum N·Σ_j v_j(θ) r^(m + d_j) e^{-γr}, d_j ∈ {0, 1}. Each angular
// factor carries an explicit cos(x), which is what makes the wall-divergent
// image potential integrable in closed form.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wedge/geometry.hpp"
#include "wedge/numerics.hpp"

namespace wedge::trial {

using numerics::QuadratureSpec;

enum class StateKind { ground = 0, antisymmetric = 1, excited = 2 };

std::string to_string(StateKind kind);
StateKind state_kind_from_index(int index);

struct TrialParams {
  double m = 1.0;   // radial power
  double n = 0.25;  // angular decay amplitude (1/Bohr)
  double p = 0.9;   // angular decay frequency, (0, 1]
  double q = 0.01;  // isotropic decay (1/Bohr)

  // DomainError for m, n <= 0, p ∉ (0, 1], q < 0; NonNormalizableError when
  // γ reaches zero at the wall (n cos(pπ/2) + q <= 0).
  void validate() const;
  double wall_decay() const;  // γ at θ = ±α/2
  // -dγ/dx at the wall, x = πθ/α.
  double wall_slope() const;
  bool operator==(const TrialParams&) const = default;
};

struct GammaProfile {
  double value;
  double d1;  // dγ/dθ
  double d2;  // d²γ/dθ²
};

GammaProfile gamma_profile(double theta, const TrialParams& params, double alpha);

// Angular integrals run over y = π/2 - x, the reduced distance from the wall.
// With p close to 1 and small q, γ nearly vanishes at the wall, the integrand
// (∝ γ^-power) turns into a narrow spike at y = 0, and cos(px) evaluated at
// x ≈ π/2 would lose most of its significant digits.
double gamma_from_wall(const TrialParams& params, double y);
// dγ/dx at x = π/2 - y.
double gamma_dx_from_wall(const TrialParams& params, double y);

// Ascending nodes y ∈ (0, π/4) spaced geometrically from the spike width
// wall_gamma/(slope·power).
std::vector<double> wall_breakpoints(double wall_gamma, double slope, double power);
std::vector<double> wall_breakpoints(const TrialParams& params);

// ∫_0^∞ r^s e^{-βr} dr = Γ(s+1)/β^(s+1)
double radial_moment(double s, double beta);

struct AngularValue {
  double value;
  double d1;  // d/dθ
  double d2;  // d²/dθ²
};

// v(θ) = coefficient · shape(x), x = πθ/α.
class AngularFactor {
 public:
  enum class Shape { cos_x, sin_2x, cos_squared };

  AngularFactor(Shape shape, double coefficient, double alpha)
      : shape_(shape), coefficient_(coefficient), scale_(std::numbers::pi / alpha) {}

  AngularValue evaluate(double theta) const;
  // Same at x = π/2 - y, accurate as y → 0.
  AngularValue evaluate_from_wall(double y) const;
  // v / cos(x), smooth up to the wall.
  double reduced(double x) const;
  double reduced_from_wall(double y) const;
  Shape shape() const { return shape_; }
  double coefficient() const { return coefficient_; }

 private:
  Shape shape_;
  double coefficient_;
  double scale_;
};

struct SeparableTerm {
  int power_offset;  // μ_j = m + power_offset
  AngularFactor factor;
};

struct OrthogonalityInputs {
  TrialParams params0;
  TrialParams params2;
  double alpha;
};

// I_n = ∫_0^{π/2} cosⁿx / [γ₀(αx/π) + γ₂(αx/π)]^{m₀+m₂+n} dx
double i_n_integral(int n, const OrthogonalityInputs& inputs,
                    const QuadratureSpec& spec = QuadratureSpec{});

// a = (m₀+m₂+2) I₃/I₂, the root of ⟨ψ₀|ψ₂⟩ = 0.
double orthogonality_constant(const OrthogonalityInputs& inputs,
                              const QuadratureSpec& spec = QuadratureSpec{});

namespace detail {
// Γ(2m+j)/(2γ)^(2m+j) for j = 0..4: every radial integral of a product of
// two separable terms (and of their r-derivatives) is one of these. Values
// are divided by exp(log_scale()) = Γ(2m)/(2γ_ref)^(2m) so that γ ≪ 1 with
// large m does not overflow.
class MomentLadder {
 public:
  static constexpr int kSize = 5;
  MomentLadder(double m, double gamma_ref);
  std::array<double, kSize> at(double gamma) const;
  double log_scale() const { return log_scale_; }

 private:
  double m_;
  double log_gamma_ref_;
  double log_scale_;
};

// ln I_n without parameter validation; the formal substitution
// n₂ = p₂ = q₂ = 0 in the closed-form ground normalization goes through here.
double log_i_n(int n, const OrthogonalityInputs& inputs, const QuadratureSpec& spec);
double i_n_unchecked(int n, const OrthogonalityInputs& inputs, const QuadratureSpec& spec);

double log_ground_normalization(const TrialParams& params, double alpha,
                                const QuadratureSpec& spec);
}  // namespace detail

struct Derivatives {
  double psi;
  double dr;
  double dtheta;
  double dtheta2;
  double dr2;
};

class SeparableState {
 public:
  static SeparableState ground(const TrialParams& params, double alpha,
                               const QuadratureSpec& spec = QuadratureSpec{});
  static SeparableState antisymmetric(const TrialParams& params, double alpha,
                                      const QuadratureSpec& spec = QuadratureSpec{});
  // `a` is recomputed from both parameter sets.
  static SeparableState excited(const TrialParams& params, const TrialParams& ground_params,
                                double alpha, const QuadratureSpec& spec = QuadratureSpec{});

  StateKind kind() const { return kind_; }
  const TrialParams& params() const { return params_; }
  double alpha() const { return alpha_; }
  double normalization() const { return std::exp(log_norm_); }
  double log_normalization() const { return log_norm_; }
  double phase() const { return phase_; }
  double orthogonality_a() const { return a_; }
  const std::vector<SeparableTerm>& terms() const { return terms_; }
  // Ground parameters an excited state was made orthogonal to.
  const TrialParams& reference_params() const { return reference_; }

  // `log_offset` divides the result by e^log_offset; optimized states can carry
  // normalizations far below the double range.
  double evaluate(double r, double theta, double log_offset = 0.0) const;
  Derivatives evaluate_derivatives(double r, double theta, double log_offset = 0.0) const;
  // +1 for states even in θ, -1 for odd.
  int parity() const { return kind_ == StateKind::antisymmetric ? -1 : 1; }

  // ∫∫ |ψ|² r dr dθ over the full opening, for the state as stored.
  double norm_integral(const QuadratureSpec& spec = QuadratureSpec{}) const;
  // ln ∫∫ |ψ/N|² r dr dθ.
  double log_unit_norm_integral(const QuadratureSpec& spec = QuadratureSpec{}) const;

  static constexpr double kReferenceRadius = 4.0;

 private:
  SeparableState(StateKind kind, const TrialParams& params, double alpha,
                 std::vector<SeparableTerm> terms, double a, const TrialParams& reference);
  void finalize(const QuadratureSpec& spec);
  void check_domain(double r, double theta) const;

  StateKind kind_;
  TrialParams params_;
  double alpha_;
  std::vector<SeparableTerm> terms_;
  double a_ = 0.0;
  TrialParams reference_;
  double log_norm_ = 0.0;
  double phase_ = 1.0;
};

// ⟨a|b⟩ over the full opening, radial part in closed form. Both states must
// share α. States of opposite parity give exactly 0.
double overlap(const SeparableState& a, const SeparableState& b,
               const QuadratureSpec& spec = QuadratureSpec{});
// Same integral restricted to θ > 0.
double upper_half_overlap(const SeparableState& a, const SeparableState& b,
                          const QuadratureSpec& spec = QuadratureSpec{});

// Normalization constant N such that ∫∫ |ψ|² r dr dθ = 1 for the unit-N draft.
double normalization(const SeparableState& draft, const QuadratureSpec& spec = QuadratureSpec{});

// Closed form N₀ = √(2^(2m₀+1)(π/α) / (Γ(2m₀+2) I₂(m₂=m₀, n₂=p₂=q₂=0))).
double ground_normalization_closed_form(const TrialParams& params, double alpha,
                                        const QuadratureSpec& spec = QuadratureSpec{});

}  // namespace wedge::trial
