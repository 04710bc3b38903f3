#pragma once

// Variational energy ⟨ψ|Ĥ|ψ⟩ of a trial state, Ĥ = -½∇² + eφ in atomic
// units, computed three independent ways:
//
//  * expectation_reduced    radial integrals in closed form (gamma functions),
//                           one adaptive quadrature over the reduced angle;
//  * e0_abc_formula         the A/B/C integrand for the ground state;
//  * expectation_oracle_2d  nested numerical quadrature over r and θ.
//
// The kinetic energy uses the gradient form ½∫|∇ψ|². It equals -½∫ψ∇²ψ because
// ψ vanishes on both walls, decays exponentially, and behaves as r^m (m > 0)
// at the corner, so every boundary term of the integration by parts is zero.

#include <memory>
#include <string>

#include "wedge/potential.hpp"
#include "wedge/trial_states.hpp"

namespace wedge::energy {

using numerics::QuadratureSpec;
using trial::SeparableState;
using trial::TrialParams;

struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double virial_residual = 0.0;  // |2T + V| / |E|

  static EnergyBreakdown from_parts(double kinetic, double potential);
};

EnergyBreakdown expectation_reduced(const SeparableState& state,
                                    const potential::AngularPotential& angular,
                                    const QuadratureSpec& spec = QuadratureSpec{});

// Convenience overload using the global potential cache (interpolated mode).
EnergyBreakdown expectation_reduced(const SeparableState& state,
                                    const QuadratureSpec& spec = QuadratureSpec{});

// Sign of the tan term in B ∋ (π/α)²[∓2 tan(x)γ₀′ + γ₀″]. The form in
// circulation has +; expanding the polar Laplacian of r^m cos(x) e^{-γr}
// gives -, which is the one that agrees with the other engines. See
// docs/e0_formula.md.
enum class TanSign { plus, minus };

double e0_abc_formula(const TrialParams& params0, const potential::AngularPotential& angular,
                        TanSign sign = TanSign::minus,
                        const QuadratureSpec& spec = QuadratureSpec{});

struct OracleOptions {
  QuadratureSpec outer;
  QuadratureSpec inner;
  OracleOptions();
};

// Brute-force nested quadrature: θ outer, r inner. f is evaluated directly
// (no interpolation) once per θ line.
EnergyBreakdown expectation_oracle_2d(const SeparableState& state,
                                      const OracleOptions& options = OracleOptions{});

// Same machinery, returns ∫∫|ψ|² r dr dθ.
double norm_oracle_2d(const SeparableState& state, const OracleOptions& options = OracleOptions{});

}  // namespace wedge::energy
