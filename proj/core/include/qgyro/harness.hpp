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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgyro/config.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/spectral.hpp"
#include "qgyro/table.hpp"

namespace qgyro {

std::string_view version() noexcept;

struct Diagnostic {
  std::string scope;
  std::string key;
  std::string value;
};

/// Output of one harness run. Tables and documents depend only on the
/// configuration; timestamps live in the metadata alone.
struct ResultBundle {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string started_utc;
  std::string finished_utc;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, std::string>> documents;  // name, JSON
  std::vector<Diagnostic> diagnostics;
  std::size_t solver_failures = 0;
  std::size_t property_violations = 0;

  const Table& table(const std::string& name) const;
  const std::string& document(const std::string& name) const;
  void merge(ResultBundle&& other);
};

/// One table of (omega, k_x, k_y) per C_Q value.
ResultBundle run_kcurves(const ExperimentConfig& cfg, unsigned threads = 1);

/// One table per sweep section and series value. Points that fail are kept
/// as rows with status set to the error and counted in solver_failures.
ResultBundle run_shift_sweeps(const ExperimentConfig& cfg,
                              unsigned threads = 1);

/// Full pipeline for one dynamics section.
struct DynamicsAnalysis {
  ModelParams params;
  Trajectory trajectory;
  Trajectory late;
  Spectrum spectrum;
  PeakSet peaks;
  std::optional<SpacingAnalysis> spacing;
  /// Peak frequency closest to zero (the precession frequency deviation).
  double deviation = 0.0;
  double late_k_perp_mean = 0.0;
  double late_k_perp_std = 0.0;
};

DynamicsAnalysis analyze_dynamics(const DynamicsBlock& block,
                                  const ModelParams& base,
                                  const SpectralBlock& spectral);

/// Trajectory, spectrum and peaks per dynamics section plus a summary table.
ResultBundle run_dynamics_spectrum(const ExperimentConfig& cfg,
                                   unsigned threads = 1);

/// Randomized invariant checks; `seed` overrides the configured one.
ResultBundle run_properties(const ExperimentConfig& cfg,
                            std::optional<std::uint64_t> seed = std::nullopt);

/// Every section present in the configuration.
ResultBundle run_all(const ExperimentConfig& cfg, unsigned threads = 1,
                     std::optional<std::uint64_t> seed = std::nullopt);

/// Writes <name>.csv per table, <name>.json per document, diagnostics.csv
/// and metadata.json into `dir`.
void write_bundle(const ResultBundle& bundle, const std::string& dir);

}  // namespace qgyro
