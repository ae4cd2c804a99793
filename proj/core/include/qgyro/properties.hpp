// Copyright 2026 The qgyro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qgyro/liouvillian.hpp"
#include "qgyro/spin_algebra.hpp"
#include "qgyro/table.hpp"

namespace qgyro {

/// Ranges the random parameter tuples are drawn from (uniformly).
struct PropertySampling {
  double gamma1_lo = 0.02, gamma1_hi = 0.5;
  double gamma2_lo = 0.01, gamma2_hi = 0.5;
  /// gamma_p is drawn from [gamma_p_lo, gamma_p_frac * gamma1]; the
  /// steady state stops being positive once gamma_p exceeds gamma1 / 2.
  double gamma_p_lo = 0.01, gamma_p_frac = 0.5;
  double omega_max = 1.0;
  double c_q_max = 0.5;
  double omega_d_lo = 0.01, omega_d_hi = 2.0;
};

struct PropertyOptions {
  PropertySampling sampling;
  SpinQuantumNumber spin = SpinQuantumNumber::spin_three_halves();
  double symmetry_tol = 1e-10;   // Eqs. for k_x, k_y and the U(1) phase
  double generator_tol = 1e-12;  // trace, Hermiticity, superoperator, U(1)
  /// Operator set used for expectation values; tests swap in a broken one.
  std::function<SpinOperators(SpinQuantumNumber)> ops_factory = spin_operators;
};

struct PropertyViolation {
  std::string check;
  int sample = 0;
  double error = 0.0;
  ModelParams params;
  double theta = 0.0;
  std::string detail;
};

struct PropertyCheckSummary {
  std::string check;
  double tolerance = 0.0;
  int evaluations = 0;
  int violations = 0;
  double max_error = 0.0;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<PropertyCheckSummary> checks;
  std::vector<PropertyViolation> violations;

  bool passed() const noexcept { return violations.empty(); }
  const PropertyCheckSummary& check(const std::string& name) const;
};

/// Names of the checks, in report order.
inline const std::vector<std::string>& property_check_names() {
  static const std::vector<std::string> names = {
      "kx_time_reversal",  "ky_time_reversal", "k_drive_flip",
      "steady_phase_u1",   "rhs_trace",        "rhs_hermiticity",
      "superop_vs_direct", "rhs_u1_covariance", "steady_solve"};
  return names;
}

/// Deterministic for a given seed (mt19937_64). count = 0 gives an empty,
/// passing report.
PropertyReport run_property_suite(std::uint64_t seed, int count,
                                  const PropertyOptions& options = {});

/// Columns check, tolerance, evaluations, violations, max_error.
Table property_summary_table(const PropertyReport& report);
/// One row per violation with the full parameter tuple.
Table property_violation_table(const PropertyReport& report);

}  // namespace qgyro
