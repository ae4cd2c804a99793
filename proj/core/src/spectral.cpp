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

#include "qgyro/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include "qgyro/error.hpp"

namespace qgyro {

std::string to_string(Window w) {
  return w == Window::kHann ? "hann" : "rectangular";
}

Window parse_window(const std::string& name) {
  if (name == "hann") return Window::kHann;
  if (name == "rectangular" || name == "rect") return Window::kRectangular;
  throw Error(ErrorKind::kConfig, fmt::format("unknown window '{}'", name));
}

double Spectrum::bin_width() const {
  return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0;
}

double Spectrum::native_bin_width() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(samples) * dt);
}

Spectrum spectrum(std::span<const Complex> series, double dt, Window window,
                  int zero_pad) {
  if (series.size() < kMinSpectrumSamples) {
    throw Error(ErrorKind::kSeriesTooShort,
                fmt::format("spectrum needs >= {} samples, got {}",
                            kMinSpectrumSamples, series.size()));
  }
  if (!(dt > 0.0) || zero_pad < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "spectrum needs dt > 0 and zero_pad >= 1");
  }
  const std::size_t n = series.size();
  const std::size_t n_fft = static_cast<std::size_t>(zero_pad) * n;

  std::vector<double> w(n, 1.0);
  if (window == Window::kHann) {
    // Periodic Hann; its sum is exactly n/2.
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                  static_cast<double>(i) /
                                  static_cast<double>(n));
    }
  }
  double wsum = 0.0;
  for (double v : w) wsum += v;

  std::vector<Complex> buf(n_fft, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) buf[i] = series[i] * w[i];
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, buf);

  // Shifted axis: bins -floor(n_fft/2) .. ceil(n_fft/2) - 1.
  const auto half = static_cast<std::ptrdiff_t>(n_fft / 2);
  const auto top = static_cast<std::ptrdiff_t>(n_fft) - half - 1;
  const double df =
      2.0 * std::numbers::pi / (static_cast<double>(n_fft) * dt);
  Spectrum spec;
  spec.window = window;
  spec.zero_pad = zero_pad;
  spec.samples = n;
  spec.dt = dt;
  spec.window_sum = wsum;
  spec.freqs.resize(n_fft);
  spec.amps.resize(n_fft);
  for (std::ptrdiff_t k = -half; k <= top; ++k) {
    const auto src = static_cast<std::size_t>(
        k >= 0 ? k : static_cast<std::ptrdiff_t>(n_fft) + k);
    const auto dst = static_cast<std::size_t>(k + half);
    spec.freqs[dst] = static_cast<double>(k) * df;
    spec.amps[dst] = std::abs(out[src]) / wsum;
  }
  return spec;
}

const Peak& PeakSet::dominant() const {
  if (peaks.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty peak set");
  }
  return *std::max_element(
      peaks.begin(), peaks.end(),
      [](const Peak& a, const Peak& b) { return a.amplitude < b.amplitude; });
}

PeakSet find_peaks(const Spectrum& spec, double rel_threshold) {
  if (!(rel_threshold > 0.0) || !(rel_threshold < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "peak threshold must lie in (0, 1)");
  }
  PeakSet set;
  set.rel_threshold = rel_threshold;
  const auto& a = spec.amps;
  if (a.size() < 3) return set;
  const double top = *std::max_element(a.begin(), a.end());
  if (!(top > 0.0)) return set;
  set.abs_threshold = rel_threshold * top;
  const double df = spec.bin_width();

  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    if (!(a[i] > a[i - 1] && a[i] > a[i + 1] && a[i] > set.abs_threshold)) {
      continue;
    }
    const double y0 = a[i - 1];
    const double y1 = a[i];
    const double y2 = a[i + 1];
    const double curvature = y0 - 2.0 * y1 + y2;  // < 0 at a strict max
    double offset = 0.0;
    double height = y1;
    if (curvature < 0.0) {
      offset = 0.5 * (y0 - y2) / curvature;
      height = y1 - 0.25 * (y0 - y2) * offset;
    }
    set.peaks.push_back(Peak{spec.freqs[i] + offset * df, height});
  }
  return set;
}

SpacingAnalysis spacing_analysis(std::span<const double> freqs) {
  if (freqs.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "spacing analysis needs at least two peaks");
  }
  std::vector<double> sorted(freqs.begin(), freqs.end());
  std::sort(sorted.begin(), sorted.end());
  SpacingAnalysis out;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    out.spacings.push_back(sorted[i] - sorted[i - 1]);
  }
  double sum = 0.0;
  for (double s : out.spacings) sum += s;
  out.mean_spacing = sum / static_cast<double>(out.spacings.size());
  for (double s : out.spacings) {
    out.max_rel_deviation =
        std::max(out.max_rel_deviation,
                 std::abs(s - out.mean_spacing) / std::abs(out.mean_spacing));
  }
  return out;
}

SpacingAnalysis spacing_analysis(const PeakSet& peaks) {
  std::vector<double> f;
  f.reserve(peaks.size());
  for (const Peak& p : peaks.peaks) f.push_back(p.freq);
  return spacing_analysis(f);
}

Table spectrum_table(const Spectrum& spec) {
  Table table;
  table.name = "spectrum";
  table.columns = {"freq", "amplitude"};
  table.add_meta("window", to_string(spec.window));
  table.add_meta("zero_pad", std::to_string(spec.zero_pad));
  table.add_meta("samples", std::to_string(spec.samples));
  table.add_meta("dt", spec.dt);
  table.rows.reserve(spec.freqs.size());
  for (std::size_t i = 0; i < spec.freqs.size(); ++i) {
    table.rows.push_back({spec.freqs[i], spec.amps[i]});
  }
  return table;
}

std::string peaks_to_json(const PeakSet& peaks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Peak& p : peaks.peaks) {
    arr.push_back({{"freq", p.freq}, {"amplitude", p.amplitude}});
  }
  return arr.dump(2);
}

}  // namespace qgyro
