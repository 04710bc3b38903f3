#pragma once

// Image potential of a charge inside a perfectly polarizable wedge, in atomic
// units (ħ = m = e²/4πε₀ = 1):
//
//   eφ(r, θ) = [k(α) - f(θ, α)] / (4r)
//
// k(α) is θ-independent; f(θ, α) diverges at the walls like (π/α)/cos(πθ/α).
// The smooth product w(x) = f·cos(x), x = πθ/α, is what the energy integrals
// consume, so it gets a cached Chebyshev interpolant per α.

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "wedge/geometry.hpp"
#include "wedge/numerics.hpp"

namespace wedge::potential {

using numerics::QuadratureSpec;

// Default tight spec for kernel integrals.
QuadratureSpec kernel_spec();

double k_coefficient(double alpha, const QuadratureSpec& spec = kernel_spec());

// Throws DomainError for |θ| >= α/2.
double f_profile(double theta, double alpha, const QuadratureSpec& spec = kernel_spec());

// w(x) = f(αx/π, α)·cos(x) for x ∈ [0, π/2]; equals π/α at x = π/2.
double wall_weighted_profile(double x, double alpha, const QuadratureSpec& spec = kernel_spec());

double image_potential_energy(double r, double theta, const WedgeGeometry& geometry,
                              const QuadratureSpec& spec = kernel_spec());

// Self-energy from the 2n-1 Kelvin images of a unit charge between two
// grounded half-planes meeting at angle π/n (θ measured from the bisector).
double image_oracle(double r, double theta, int n);

namespace detail {
// Integrands (without the 2/(απ) and 2/α prefactors) in the original η
// variable. Both are evaluated through L = -ln η so the removable η → 1
// limits stay accurate.
double k_integrand(double eta, double alpha);
double f_integrand(double eta, double theta, double alpha);
double k_integrand_limit(double alpha);                 // (π² - α²)/(6α)
double f_integrand_limit(double theta, double alpha);   // (π/α)/(2cos²(πθ/α))
}  // namespace detail

// Per-α angular data used by the energy engine.
class AngularPotential {
 public:
  enum class Mode { interpolated, direct };

  AngularPotential(double alpha, Mode mode, const QuadratureSpec& spec = kernel_spec(),
                   int chebyshev_order = 64);

  double alpha() const { return alpha_; }
  double k() const { return k_; }
  Mode mode() const { return mode_; }
  // w(x) for x ∈ [0, π/2].
  double w(double x) const;
  // g = k - f at reduced angle x, used by the A/B/C E₀ integrand.
  double g(double x) const;

 private:
  double alpha_;
  double k_;
  Mode mode_;
  QuadratureSpec spec_;
  std::vector<double> nodes_;   // Chebyshev-Lobatto points on [-π/2, π/2]
  std::vector<double> values_;
  std::vector<double> weights_;
};

// Run-scoped memo of k(α) and the w interpolants. Concurrent readers, serialized
// insertion; a hit returns the object built on the first request.
class PotentialCache {
 public:
  std::shared_ptr<const AngularPotential> get(double alpha, AngularPotential::Mode mode,
                                              const QuadratureSpec& spec = kernel_spec());
  double k(double alpha, const QuadratureSpec& spec = kernel_spec());

  static PotentialCache& global();

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<double, int>, std::shared_ptr<const AngularPotential>> angular_;
  std::map<double, double> k_;
};

struct GridRequest {
  double r_max = 40.0;
  int radial_count = 64;
  int angular_count = 64;
};

// Polar grid covering the full circle; nodes in the material are masked and
// carry NaN.
struct FieldGrid {
  double alpha = 0.0;
  std::vector<double> radial_nodes;
  std::vector<double> angular_nodes;
  std::vector<double> values;  // row-major [radial][angular]
  std::vector<char> inside;

  double value(std::size_t i, std::size_t j) const { return values[i * angular_nodes.size() + j]; }
  bool is_inside(std::size_t i, std::size_t j) const {
    return inside[i * angular_nodes.size() + j] != 0;
  }
};

FieldGrid potential_grid(const WedgeGeometry& geometry, const GridRequest& request,
                         Execution exec = Execution::parallel,
                         const QuadratureSpec& spec = kernel_spec());

}  // namespace wedge::potential
