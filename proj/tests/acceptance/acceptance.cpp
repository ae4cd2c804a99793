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

// Acceptance run: one PASS/FAIL line per criterion, INFO lines for context.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "qgyro/config.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/error.hpp"
#include "qgyro/harness.hpp"
#include "qgyro/properties.hpp"
#include "qgyro/spectral.hpp"
#include "qgyro/steady_state.hpp"

namespace {

using namespace qgyro;
using Clock = std::chrono::steady_clock;

int g_failed = 0;

void report(const std::string& id, bool pass, const std::string& what) {
  if (!pass) ++g_failed;
  std::cout << fmt::format("{} {} {}\n", id, pass ? "PASS" : "FAIL", what)
            << std::flush;
}

void info(const std::string& id, const std::string& what) {
  std::cout << fmt::format("{} INFO {}\n", id, what) << std::flush;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string config_path(const std::string& name) {
  return (std::filesystem::path(QGYRO_CONFIG_DIR) / name).string();
}

// Relaxation and drive shared by the k-curve and shift reproductions.
ModelParams base_params(double gamma_p) {
  ModelParams p;
  p.gamma1 = 0.05;
  p.gamma2 = 0.05;
  p.omega_d = 0.05;
  p.gamma_p = gamma_p;
  return p;
}
constexpr double kDocumentedPumping = 0.05;
constexpr double kReproductionPumping = 0.0125;

void criterion_symmetry(const PropertyReport& r, double elapsed) {
  double worst = 0.0;
  int violations = 0;
  for (const char* name : {"kx_time_reversal", "ky_time_reversal",
                           "k_drive_flip", "steady_solve"}) {
    const auto& c = r.check(name);
    worst = std::max(worst, c.max_error);
    violations += c.violations;
  }
  const bool pass = violations == 0 && elapsed < 60.0 &&
                    r.check("ky_time_reversal").evaluations == 100;
  report("C1", pass,
         fmt::format("symmetry suite over {} random tuples: k_x reversal {:.2e}, "
                     "k_y reversal {:.2e}, drive flip {:.2e} (tol 1e-10), "
                     "{} violations, {:.1f} s (limit 60 s)",
                     r.count, r.check("kx_time_reversal").max_error,
                     r.check("ky_time_reversal").max_error,
                     r.check("k_drive_flip").max_error, violations, elapsed));
  info("C1", fmt::format("U(1) steady-state phase covariance max error {:.2e}",
                         r.check("steady_phase_u1").max_error));
}

void criterion_generator(const PropertyReport& r) {
  int violations = 0;
  for (const char* name : {"rhs_trace", "rhs_hermiticity", "superop_vs_direct",
                           "rhs_u1_covariance"}) {
    violations += r.check(name).violations;
  }
  const bool pass = violations == 0 && r.check("rhs_trace").evaluations == 100;
  report("C2", pass,
         fmt::format("generator on 100 random states: trace {:.2e}, "
                     "hermiticity {:.2e}, superoperator vs direct {:.2e}, "
                     "U(1) covariance {:.2e} (tol 1e-12)",
                     r.check("rhs_trace").max_error,
                     r.check("rhs_hermiticity").max_error,
                     r.check("superop_vs_direct").max_error,
                     r.check("rhs_u1_covariance").max_error));
}

void literal_range_probe() {
  // Steady states with every rate drawn from [0.01, 0.5], the pumping rate
  // independently of gamma1.
  int non_positive = 0;
  std::mt19937_64 rng(0);
  for (int n = 0; n < 100; ++n) {
    ModelParams p;
    auto u = [&](double lo, double hi) {
      return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    p.gamma1 = u(0.01, 0.5);
    p.gamma2 = u(0.01, 0.5);
    p.gamma_p = u(0.01, 0.5);
    p.omega = u(-1.0, 1.0);
    p.c_q = u(-0.5, 0.5);
    p.omega_d = u(0.01, 2.0);
    p.beta = u(-std::numbers::pi, std::numbers::pi);
    try {
      steady_state(p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kNotPositive) ++non_positive;
    }
  }
  info("C1", fmt::format("with gamma_p drawn from [0.01, 0.5] independently of "
                         "gamma1, {} of 100 steady states are not positive; "
                         "the suite draws gamma_p from [0.01, gamma1/2]",
                         non_positive));
}

void criterion_zero_quadrupole() {
  const ModelParams p = base_params(kDocumentedPumping);
  try {
    const ShiftSolution s = solve_shift(p);
    report("C3", std::abs(s.omega_s) < 1e-9,
           fmt::format("C_Q = 0, gamma_p = {}: |omega_s| = {:.2e} (tol 1e-9)",
                       p.gamma_p, std::abs(s.omega_s)));
  } catch (const Error& e) {
    ModelParams q = p;
    q.omega = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::steady_state(q));
    report("C3", false,
           fmt::format("C_Q = 0, gamma_p = {}: solver raised {} ({}); "
                       "independent eigenvector reference gives smallest "
                       "steady-state eigenvalue {:.4f} at omega = 0",
                       p.gamma_p, to_string(e.kind()), e.what(),
                       es.eigenvalues().minCoeff()));
  }
  const ShiftSolution s = solve_shift(base_params(kReproductionPumping));
  info("C3", fmt::format("same check with gamma_p = {}: |omega_s| = {:.2e}",
                         kReproductionPumping, std::abs(s.omega_s)));
}

void criterion_sign_monotone() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string notes;
  double prev_abs = -1.0;
  double prev_kx = std::numeric_limits<double>::infinity();
  std::string cq_line;
  for (double c_q : {0.01, 0.02, 0.05}) {
    ModelParams p = base_params(kReproductionPumping);
    p.c_q = c_q;
    const ShiftSolution s = solve_shift(p);
    pass = pass && s.omega_s < 0.0 && std::abs(s.omega_s) >= prev_abs &&
           s.k_x <= prev_kx;
    prev_abs = std::abs(s.omega_s);
    prev_kx = s.k_x;
    cq_line += fmt::format(" C_Q={}: omega_s={:.4e} k_x={:.4e};", c_q,
                           s.omega_s, s.k_x);

    ModelParams q = p;
    q.c_q = -c_q;
    q.beta = -p.beta;
    const double mirrored = solve_shift(q).omega_s;
    const double flip_err = std::abs(s.omega_s + mirrored);
    pass = pass && flip_err < 1e-10;
    notes += fmt::format(" {:.1e}", flip_err);
  }
  // (C_Q, beta) flip at a nonzero phase delay too.
  {
    ModelParams p = base_params(kReproductionPumping);
    p.c_q = 0.02;
    p.beta = 0.3;
    ModelParams q = p;
    q.c_q = -p.c_q;
    q.beta = -p.beta;
    const double err = std::abs(solve_shift(p).omega_s + solve_shift(q).omega_s);
    pass = pass && err < 1e-10;
    notes += fmt::format(" {:.1e}(beta=0.3)", err);
  }
  std::string drive_line;
  double prev = std::numeric_limits<double>::infinity();
  for (double omega_d : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
    ModelParams p = base_params(kReproductionPumping);
    p.c_q = 0.02;
    p.omega_d = omega_d;
    const double a = std::abs(solve_shift(p).omega_s);
    pass = pass && a <= prev;
    prev = a;
    drive_line += fmt::format(" {:.3e}", a);
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 120.0;
  report("C4", pass,
         fmt::format("sign/monotonicity (gamma_p = {}):{} |omega_s| over "
                     "Omega_d:{}; sign-flip errors:{} (tol 1e-10); {:.1f} s "
                     "(limit 120 s)",
                     kReproductionPumping, cq_line, drive_line, notes, elapsed));
}

void criterion_dynamics_oracle() {
  const SpinQuantumNumber spin = SpinQuantumNumber::spin_three_halves();
  for (double c_q : {0.02, 0.05}) {
    const auto t0 = Clock::now();
    ModelParams p = base_params(kReproductionPumping);
    p.c_q = c_q;
    const ShiftSolution s = solve_shift(p);
    const Trajectory traj = integrate_feedback(
        DensityMatrix::basis_state(spin, 1.5), p, {}, 400.0, 0.05);
    const Trajectory late = late_window(traj, 0.5);
    const Spectrum spec = spectrum(late.k_plus, late.dt());
    const PeakSet peaks = find_peaks(spec);
    double kperp_err = 0.0;
    for (std::size_t i = 0; i < late.size(); ++i) {
      kperp_err = std::max(kperp_err, std::abs(late.k_perp(i) - s.k_x));
    }
    const double freq_err =
        peaks.size() == 1 ? std::abs(peaks.peaks[0].freq + s.omega_s) : 1.0;
    const double elapsed = seconds_since(t0);
    report("C5",
           peaks.size() == 1 && freq_err < 1e-3 && kperp_err < 1e-4 &&
               elapsed < 120.0,
           fmt::format("C_Q = {}, rho0 = |3/2><3/2|: {} peak(s), "
                       "|f_peak + omega_s| = {:.2e} (tol 1e-3), "
                       "max |K_perp - k_x| over late window = {:.2e} "
                       "(tol 1e-4), {:.1f} s (limit 120 s)",
                       c_q, peaks.size(), freq_err, kperp_err, elapsed));
  }
}

const DynamicsAnalysis* find_run(const std::vector<DynamicsAnalysis>& runs,
                                 const ExperimentConfig& cfg,
                                 const std::string& label) {
  for (std::size_t i = 0; i < cfg.dynamics.size(); ++i) {
    if (cfg.dynamics[i].label == label) return &runs[i];
  }
  throw Error(ErrorKind::kConfig, "missing dynamics section " + label);
}

void criterion_multitone() {
  const auto t0 = Clock::now();
  const ExperimentConfig cfg = load_config(config_path("multitone.ini"));
  std::vector<DynamicsAnalysis> runs;
  for (const DynamicsBlock& d : cfg.dynamics) {
    runs.push_back(analyze_dynamics(d, cfg.model, cfg.spectral));
  }
  const DynamicsAnalysis& mixed = *find_run(runs, cfg, "mixed_weak");
  const DynamicsAnalysis& top = *find_run(runs, cfg, "top_weak");
  const DynamicsAnalysis& strong = *find_run(runs, cfg, "mixed_strong");

  const bool three = mixed.peaks.size() == 3;
  const double spacing = mixed.spacing ? mixed.spacing->mean_spacing : 0.0;
  const double spread = mixed.spacing ? mixed.spacing->max_rel_deviation : 1.0;
  const bool spacing_ok = std::abs(spacing - 0.855) / 0.855 < 0.02;
  std::string freqs;
  for (const Peak& pk : mixed.peaks.peaks) freqs += fmt::format(" {:.4f}", pk.freq);
  report("C6", three && spread < 0.02 && spacing_ok,
         fmt::format("rho0 = I/4, Omega_d = 0.1, C_Q = {}: {} peaks at{}; mean "
                     "spacing {:.4f} (target 0.855, tol 2%), max spacing "
                     "deviation {:.2e} (tol 2e-2)",
                     mixed.params.c_q, mixed.peaks.size(), freqs, spacing,
                     spread));
  report("C6", top.peaks.size() == 1,
         fmt::format("rho0 = |3/2><3/2|, Omega_d = 0.1: {} peak(s), dominant "
                     "at {:.4f}",
                     top.peaks.size(),
                     top.peaks.size() ? top.peaks.dominant().freq : NAN));
  const double dev_weak = std::abs(mixed.deviation);
  const double dev_strong = std::abs(strong.deviation);
  const double ratio_weak = dev_weak / 0.056;
  const double ratio_strong = dev_strong / 0.008;
  auto within2 = [](double r) { return r >= 0.5 && r <= 2.0; };
  const double elapsed = seconds_since(t0);
  report("C6",
         strong.peaks.size() == 1 && dev_strong < dev_weak &&
             within2(ratio_weak) && within2(ratio_strong) && elapsed < 600.0,
         fmt::format("rho0 = I/4, Omega_d = 1.5: {} peak(s); |deviation| "
                     "{:.4f} vs {:.4f} at Omega_d = 0.1 (reference 0.008 vs "
                     "0.056, ratios {:.2f} and {:.2f}, allowed [0.5, 2]); "
                     "{:.1f} s (limit 600 s)",
                     strong.peaks.size(), dev_strong, dev_weak, ratio_strong,
                     ratio_weak, elapsed));
  info("C6", fmt::format("rates gamma1 = {}, gamma2 = {}, gamma_p = {}; "
                         "window {}, threshold {}",
                         cfg.model.gamma1, cfg.model.gamma2, cfg.model.gamma_p,
                         to_string(cfg.spectral.window),
                         cfg.spectral.threshold));
  // The 2 C_Q estimate of the spacing, checked at C_Q = 0.43.
  DynamicsBlock probe = cfg.dynamics.front();
  for (const DynamicsBlock& d : cfg.dynamics) {
    if (d.label == "mixed_weak") probe = d;
  }
  probe.c_q = 0.43;
  const DynamicsAnalysis alt = analyze_dynamics(probe, cfg.model, cfg.spectral);
  std::string alt_freqs;
  for (const Peak& pk : alt.peaks.peaks) alt_freqs += fmt::format(" {:.4f}", pk.freq);
  info("C6", fmt::format("at C_Q = 0.43 the same run gives {} peak(s) at{}",
                         alt.peaks.size(), alt_freqs));
}

std::vector<Complex> tones(const std::vector<std::pair<double, double>>& parts,
                           std::size_t n, double dt) {
  std::vector<Complex> x(n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    for (const auto& [f, a] : parts) x[i] += a * std::polar(1.0, f * t);
  }
  return x;
}

void criterion_spectral() {
  const double dt = 0.05;
  const std::size_t n = 4000;
  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  double worst_amp = 0.0;
  double worst_freq = 0.0;
  bool counts_ok = true;
  const std::vector<std::vector<std::pair<double, double>>> cases = {
      {{0.0, 1.0}},
      {{0.3117, 0.5}},
      {{-1.2345, 0.05}},
      {{-0.80, 0.2}, {0.056, 1.0}, {0.91, 0.5}},
      {{-0.7731, 0.3}, {0.0813, 0.3}, {0.9377, 0.3}},
  };
  for (const auto& c : cases) {
    const PeakSet p = find_peaks(spectrum(tones(c, n, dt), dt));
    if (p.size() != c.size()) {
      counts_ok = false;
      continue;
    }
    auto sorted = c;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < c.size(); ++k) {
      worst_freq = std::max(worst_freq,
                            std::abs(p.peaks[k].freq - sorted[k].first) / bin);
      worst_amp = std::max(worst_amp, std::abs(p.peaks[k].amplitude -
                                               sorted[k].second) /
                                          sorted[k].second);
    }
  }
  report("C7", counts_ok && worst_amp < 0.02 && worst_freq < 0.2,
         fmt::format("synthetic single/triple tones: max amplitude error "
                     "{:.2e} (tol 2e-2), max frequency error {:.3f} bin "
                     "(tol 0.2)",
                     worst_amp, worst_freq));
  const std::vector<double> quoted = {-0.80, 0.056, 0.91};
  const SpacingAnalysis a = spacing_analysis(quoted);
  report("C7",
         std::abs(a.mean_spacing - 0.855) < 1e-12 && a.max_rel_deviation < 0.002,
         fmt::format("spacing of {{-0.80, 0.056, 0.91}}: mean {:.6f}, max "
                     "relative deviation {:.2e} (tol 2e-3)",
                     a.mean_spacing, a.max_rel_deviation));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "qgyro_acceptance";
  fs::remove_all(root);
  bool pass = true;
  std::size_t compared = 0;
  const std::vector<std::pair<std::string, std::function<ResultBundle(
                                               const ExperimentConfig&, unsigned)>>>
      runs = {
          {"kcurves.ini", [](const ExperimentConfig& c, unsigned t) {
             return run_kcurves(c, t);
           }},
          {"shift_vs_cq.ini", [](const ExperimentConfig& c, unsigned t) {
             return run_shift_sweeps(c, t);
           }},
          {"shift_vs_drive.ini", [](const ExperimentConfig& c, unsigned t) {
             return run_shift_sweeps(c, t);
           }},
          {"shift_vs_beta.ini", [](const ExperimentConfig& c, unsigned t) {
             return run_shift_sweeps(c, t);
           }},
          {"multitone.ini", [](const ExperimentConfig& c, unsigned t) {
             return run_dynamics_spectrum(c, t);
           }},
          {"properties.ini", [](const ExperimentConfig& c, unsigned) {
             return run_properties(c);
           }},
      };
  for (const auto& [file, fn] : runs) {
    const ExperimentConfig cfg = load_config(config_path(file));
    const fs::path a = root / (file + ".a");
    const fs::path b = root / (file + ".b");
    write_bundle(fn(cfg, 1), a.string());
    write_bundle(fn(cfg, 2), b.string());
    for (const auto& entry : fs::directory_iterator(a)) {
      const std::string name = entry.path().filename().string();
      if (name == "metadata.json") continue;  // carries timestamps
      ++compared;
      if (!fs::exists(b / name) || slurp(entry.path()) != slurp(b / name)) {
        pass = false;
        info("C8", "differs: " + file + " " + name);
      }
    }
  }
  fs::remove_all(root);
  report("C8", pass && compared > 0,
         fmt::format("reran every shipped config with 1 and 2 threads; {} "
                     "output files compared byte for byte",
                     compared));
}

}  // namespace

int main() {
  try {
    const auto t0 = Clock::now();
    const PropertyReport props = run_property_suite(0, 100);
    const double elapsed = seconds_since(t0);
    criterion_symmetry(props, elapsed);
    literal_range_probe();
    criterion_generator(props);
    criterion_zero_quadrupole();
    criterion_sign_monotone();
    criterion_dynamics_oracle();
    criterion_multitone();
    criterion_spectral();
    criterion_determinism();
  } catch (const std::exception& e) {
    std::cout << "ABORT " << e.what() << '\n';
    return 2;
  }
  std::cout << (g_failed == 0 ? "ALL PASS\n"
                              : fmt::format("{} FAILED\n", g_failed));
  return g_failed == 0 ? 0 : 1;
}
