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
#include <string>
#include <utility>
#include <vector>

#include "qgyro/dynamics.hpp"
#include "qgyro/liouvillian.hpp"
#include "qgyro/spectral.hpp"
#include "qgyro/spin_algebra.hpp"
#include "qgyro/steady_state.hpp"

namespace qgyro {

struct KCurvesBlock {
  std::vector<double> c_q_values;
  double omega_start = -0.5;
  double omega_stop = 0.5;
  int omega_points = 201;
};

/// One [sweep.<label>] section. When `series_key` is set the sweep is
/// repeated once per entry of `series_values` with that parameter replaced.
struct SweepBlock {
  std::string label;
  SweepAxis axis = SweepAxis::kCQ;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  std::string series_key;
  std::vector<double> series_values;
  bool coherences = false;
};

enum class InitialStateKind { kBasis, kMixed, kMatrix };

struct InitialState {
  InitialStateKind kind = InitialStateKind::kBasis;
  double m = 1.5;
  Operator matrix;  // only for kMatrix

  DensityMatrix build(SpinQuantumNumber spin) const;
  std::string describe() const;
};

/// One [dynamics.<label>] section. Unset overrides fall back to [model].
struct DynamicsBlock {
  std::string label;
  InitialState rho0;
  std::optional<double> omega_d;
  std::optional<double> c_q;
  std::optional<double> beta;
  double t_end = 400.0;
  double output_dt = 0.05;
  double late_fraction = 0.5;
  FeedbackConfig feedback;

  ModelParams params(const ModelParams& base) const;
};

struct SpectralBlock {
  Window window = Window::kHann;
  double threshold = kDefaultPeakThreshold;
  int zero_pad = 4;
};

struct PropertiesBlock {
  unsigned long long seed = 0;
  int count = 100;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string source;  // file path or "<string>"
  ModelParams model;
  ShiftOptions shift;
  std::optional<KCurvesBlock> kcurves;
  std::vector<SweepBlock> sweeps;
  std::vector<DynamicsBlock> dynamics;
  SpectralBlock spectral;
  PropertiesBlock properties;
  std::string output_dir = "out";

  /// Every resolved setting, defaults included, as ordered key/value pairs.
  std::vector<std::pair<std::string, std::string>> snapshot() const;
};

/// Flat key/value file with [section] headers. Unknown sections or keys,
/// malformed numbers and invalid parameters raise Error(kConfig).
ExperimentConfig parse_config(const std::string& text,
                              const std::string& source = "<string>");
ExperimentConfig load_config(const std::string& path);

/// Sets a ModelParams field by its config key (omega, c_q, omega_d, beta,
/// gamma1, gamma2, gamma_p). Throws Error(kConfig) for other keys.
void set_model_param(ModelParams& params, const std::string& key, double value);

/// Model parameters as metadata pairs, in a fixed order.
std::vector<std::pair<std::string, std::string>> model_metadata(
    const ModelParams& params);

std::string format_spin(SpinQuantumNumber spin);

}  // namespace qgyro
