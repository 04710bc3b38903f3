#pragma once

#include <numbers>

#include "wedge/numerics.hpp"

namespace wedge {

// Vacuum opening of a perfectly polarizable wedge. θ = 0 bisects the opening;
// the material occupies |θ| >= α/2.
class WedgeGeometry {
 public:
  explicit WedgeGeometry(double alpha, double material_contrast = 1.0,
                         double outer_permittivity = 1.0);

  double alpha() const { return alpha_; }
  double half_angle() const { return 0.5 * alpha_; }
  // π/α, the angular wavenumber of the lowest wall-vanishing harmonic.
  double angular_scale() const { return std::numbers::pi / alpha_; }
  double material_contrast() const { return 1.0; }
  double outer_permittivity() const { return 1.0; }

  bool inside(double r, double theta) const { return r > 0.0 && std::abs(theta) < half_angle(); }

 private:
  double alpha_;
};

enum class Execution { serial, parallel };

namespace units {

inline constexpr double kHartreeToEv = 27.211386;

enum class System { atomic, electronvolt };

inline double hartree_to_ev(double e) { return e * kHartreeToEv; }
inline double ev_to_hartree(double e) { return e / kHartreeToEv; }
inline double convert(double hartree, System to) {
  return to == System::electronvolt ? hartree_to_ev(hartree) : hartree;
}

}  // namespace units

}  // namespace wedge
