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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgyro/liouvillian.hpp"
#include "qgyro/spin_algebra.hpp"

namespace qgyro {

struct SteadyStateOptions {
  /// sigma_{second smallest} / sigma_{smallest} must exceed this.
  double min_gap_ratio = 1e6;
  /// Eigenvalues below -negativity_tol after Hermitization are an error.
  double negativity_tol = 1e-8;
};

struct SteadyStateResult {
  DensityMatrix rho_s;
  double k_x = 0.0;
  double k_y = 0.0;
  /// max |L vec(rho_s)|
  double residual = 0.0;
  /// Largest singular value of L, the scale the residual is judged against.
  double spectral_scale = 0.0;
  double gap_ratio = 0.0;
  int null_dim = 1;
};

/// Steady state of the fixed-omega generator via SVD of the superoperator.
/// Throws Error(kNullSpaceDegenerate) or Error(kNotPositive).
SteadyStateResult steady_state(const ModelParams& params,
                               const SteadyStateOptions& opts = {});
SteadyStateResult steady_state(const ModelParams& params,
                               const SpinOperators& ops,
                               const SteadyStateOptions& opts = {});

struct KCurvePoint {
  double omega = 0.0;
  double k_x = 0.0;
  double k_y = 0.0;
};

/// k_x and k_y against omega; `base.omega` is ignored. The grid must be
/// strictly increasing.
std::vector<KCurvePoint> k_curves(const ModelParams& base,
                                  std::span<const double> omega_grid,
                                  unsigned threads = 1);

struct ShiftOptions {
  /// Scan interval for omega; defaults to +-((2K+1)|C_Q| + 5 max_rate).
  std::optional<std::pair<double, double>> bracket;
  int scan_points = 201;
  double ky_tolerance = 1e-10;
  int max_iterations = 200;
  /// C_Q continuation steps used when the scan finds several valid roots.
  int homotopy_steps = 24;
  SteadyStateOptions steady;
};

struct ShiftSolution {
  double omega_s = 0.0;
  double k_x = 0.0;
  double k_y = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  int iterations = 0;
  /// Valid roots in the scan besides the returned one.
  int other_roots = 0;
  bool used_homotopy = false;
};

/// Root of omega -> k_y(omega) with k_x > 0; `base.omega` is ignored.
/// Throws Error(kNoBracket) or Error(kSolutionRejected).
ShiftSolution solve_shift(const ModelParams& base, const ShiftOptions& opts = {});
ShiftSolution solve_shift(const ModelParams& base, const SpinOperators& ops,
                          const ShiftOptions& opts);

/// rho_{m,m+1} = <m| rho |m+1> in polar form.
struct Coherence {
  double m = 0.0;
  double norm = 0.0;
  double phase = 0.0;
};

/// One entry per m = -K, ..., K-1 (ascending m).
std::vector<Coherence> coherence_decomposition(const DensityMatrix& rho,
                                               SpinQuantumNumber spin);

enum class SweepAxis { kCQ, kOmegaD, kBeta };

std::string to_string(SweepAxis axis);
/// Accepts "c_q", "omega_d", "beta". Throws Error(kConfig) otherwise.
SweepAxis parse_sweep_axis(const std::string& name);
void set_axis(ModelParams& params, SweepAxis axis, double value);

struct SweepPoint {
  double value = 0.0;
  std::optional<ShiftSolution> solution;
  std::vector<Coherence> coherences;  // filled when requested and solved
  std::string failure;                // empty on success
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kCQ;
  std::vector<SweepPoint> points;

  std::size_t failures() const;
};

struct SweepOptions {
  ShiftOptions shift;
  bool coherences = false;
  unsigned threads = 1;
};

/// Per-point failures are recorded and the sweep continues.
SweepResult sweep_shift(SweepAxis axis, std::span<const double> grid,
                        const ModelParams& base, const SweepOptions& opts = {});

/// Throws Error(kInvalidArgument) unless the grid is strictly increasing.
void require_monotone_grid(std::span<const double> grid);

/// `points` values from start to stop inclusive.
std::vector<double> linspace(double start, double stop, int points);

}  // namespace qgyro
