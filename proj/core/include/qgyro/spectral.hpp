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

#include <span>
#include <string>
#include <vector>

#include "qgyro/spin_algebra.hpp"
#include "qgyro/table.hpp"

namespace qgyro {

enum class Window { kRectangular, kHann };

std::string to_string(Window w);
Window parse_window(const std::string& name);

/// Two-sided amplitude spectrum on an angular-frequency axis: a component
/// exp(+i nu t) shows up at +nu, in the same unit as every model rate.
struct Spectrum {
  std::vector<double> freqs;  // strictly increasing, symmetric about 0
  std::vector<double> amps;   // |X_k| / sum(w)
  Window window = Window::kHann;
  int zero_pad = 4;
  std::size_t samples = 0;    // series length before padding
  double dt = 0.0;
  double window_sum = 0.0;    // sum of the window weights

  /// Spacing of the padded frequency grid.
  double bin_width() const;
  /// Spacing an unpadded transform would have, 2 pi / (samples * dt).
  double native_bin_width() const;
};

inline constexpr std::size_t kMinSpectrumSamples = 16;

/// Windowed, mean-kept transform. The series is zero-padded to zero_pad * n
/// points; the shifted axis runs from -floor(m/2) to ceil(m/2) - 1 bins. Amplitudes
/// are divided by the window sum, so a unit tone on a bin reads 1.
/// Throws Error(kSeriesTooShort) below kMinSpectrumSamples.
Spectrum spectrum(std::span<const Complex> series, double dt,
                  Window window = Window::kHann, int zero_pad = 4);

struct Peak {
  double freq = 0.0;
  double amplitude = 0.0;
};

struct PeakSet {
  std::vector<Peak> peaks;  // sorted by frequency
  double rel_threshold = 0.0;
  double abs_threshold = 0.0;

  std::size_t size() const noexcept { return peaks.size(); }
  /// Peak with the largest amplitude. Requires a non-empty set.
  const Peak& dominant() const;
};

inline constexpr double kDefaultPeakThreshold = 0.05;

/// Strict local maxima above rel_threshold * max, each refined by a
/// three-point parabola through the neighbouring bins.
PeakSet find_peaks(const Spectrum& spec,
                   double rel_threshold = kDefaultPeakThreshold);

struct SpacingAnalysis {
  std::vector<double> spacings;
  double mean_spacing = 0.0;
  double max_rel_deviation = 0.0;
};

/// Throws Error(kInvalidArgument) with fewer than two peaks.
SpacingAnalysis spacing_analysis(const PeakSet& peaks);
SpacingAnalysis spacing_analysis(std::span<const double> freqs);

/// Columns freq, amplitude.
Table spectrum_table(const Spectrum& spec);

/// JSON array of {"freq": ..., "amplitude": ...} records.
std::string peaks_to_json(const PeakSet& peaks);

}  // namespace qgyro
