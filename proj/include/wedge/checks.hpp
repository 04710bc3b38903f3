#pragma once

// Battery of analytic limits and cross-checks run by `limits-check`: kernel
// limits, Kelvin image sums, normalization closed forms, three-way energy
// agreement, virial and scaling certificates, and the bisector null tests.

#include <cstdint>
#include <string>
#include <vector>

namespace wedge::checks {

struct CheckResult {
  std::string name;
  double measured = 0.0;   // error measure, compared against tolerance
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct CheckOptions {
  double quad_tolerance = 1e-12;
  std::uint64_t seed = 20100601;
  // Test hook: perturbs one measured value so the harness can be seen to fail.
  bool inject_fault = false;
};

std::vector<CheckResult> limits_check(const CheckOptions& options);

}  // namespace wedge::checks
