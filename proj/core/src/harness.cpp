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

#include "qgyro/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "qgyro/error.hpp"
#include "qgyro/parallel.hpp"
#include "qgyro/properties.hpp"
#include "qgyro/steady_state.hpp"

namespace qgyro {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

std::string short_number(double v) { return fmt::format("{:g}", v); }

std::string format_m(double m) {
  const long long twice = std::llround(2.0 * m);
  return twice % 2 == 0 ? std::to_string(twice / 2)
                        : fmt::format("{}/2", twice);
}

ResultBundle start_bundle(const ExperimentConfig& cfg) {
  ResultBundle b;
  b.experiment = cfg.name;
  b.metadata = cfg.snapshot();
  b.metadata.emplace_back("code.version", std::string(version()));
  b.started_utc = utc_now();
  return b;
}

void finish_bundle(ResultBundle& b) { b.finished_utc = utc_now(); }

/// Table pre-filled with the experiment name and the full parameter set.
Table model_table(const std::string& name, const ExperimentConfig& cfg,
                  const ModelParams& params,
                  const std::string& swept_key = {}) {
  Table t;
  t.name = name;
  t.add_meta("experiment", cfg.name);
  t.add_meta("code_version", std::string(version()));
  for (auto& [k, v] : model_metadata(params)) {
    t.add_meta(k, k == swept_key ? std::string("swept") : v);
  }
  return t;
}

void add_shift_meta(Table& t, const ShiftOptions& s) {
  t.add_meta("scan_points", std::to_string(s.scan_points));
  t.add_meta("homotopy_steps", std::to_string(s.homotopy_steps));
  t.add_meta("ky_tolerance", s.ky_tolerance);
  t.add_meta("bracket",
             s.bracket ? fmt::format("{} {}", format_double(s.bracket->first),
                                     format_double(s.bracket->second))
                       : std::string("auto"));
}

}  // namespace

std::string_view version() noexcept { return QGYRO_VERSION_STRING; }

unsigned resolve_thread_count(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("QGYRO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

const Table& ResultBundle::table(const std::string& name) const {
  for (const Table& t : tables) {
    if (t.name == name) return t;
  }
  throw Error(ErrorKind::kInvalidArgument,
              fmt::format("bundle has no table '{}'", name));
}

const std::string& ResultBundle::document(const std::string& name) const {
  for (const auto& [n, text] : documents) {
    if (n == name) return text;
  }
  throw Error(ErrorKind::kInvalidArgument,
              fmt::format("bundle has no document '{}'", name));
}

void ResultBundle::merge(ResultBundle&& other) {
  if (experiment.empty()) experiment = other.experiment;
  if (metadata.empty()) metadata = std::move(other.metadata);
  if (started_utc.empty()) started_utc = other.started_utc;
  finished_utc = other.finished_utc;
  for (auto& t : other.tables) tables.push_back(std::move(t));
  for (auto& d : other.documents) documents.push_back(std::move(d));
  for (auto& d : other.diagnostics) diagnostics.push_back(std::move(d));
  solver_failures += other.solver_failures;
  property_violations += other.property_violations;
}

ResultBundle run_kcurves(const ExperimentConfig& cfg, unsigned threads) {
  if (!cfg.kcurves || cfg.kcurves->c_q_values.empty()) {
    throw Error(ErrorKind::kConfig, "kcurves: C_Q list is empty");
  }
  const KCurvesBlock& k = *cfg.kcurves;
  ResultBundle b = start_bundle(cfg);
  const std::vector<double> grid =
      linspace(k.omega_start, k.omega_stop, k.omega_points);
  for (double c_q : k.c_q_values) {
    ModelParams p = cfg.model;
    p.c_q = c_q;
    const auto points = k_curves(p, grid, threads);
    Table t = model_table(fmt::format("kcurves_c_q_{}", short_number(c_q)),
                          cfg, p, "omega");
    t.add_meta("omega_start", k.omega_start);
    t.add_meta("omega_stop", k.omega_stop);
    t.add_meta("omega_points", std::to_string(k.omega_points));
    t.columns = {"omega", "k_x", "k_y"};
    double min_kx = std::numeric_limits<double>::infinity();
    for (const KCurvePoint& pt : points) {
      t.rows.push_back({pt.omega, pt.k_x, pt.k_y});
      min_kx = std::min(min_kx, pt.k_x);
    }
    b.diagnostics.push_back({t.name, "min_k_x", format_double(min_kx)});
    b.tables.push_back(std::move(t));
  }
  finish_bundle(b);
  return b;
}

ResultBundle run_shift_sweeps(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.sweeps.empty()) {
    throw Error(ErrorKind::kConfig, "shift-sweep: no [sweep.*] sections");
  }
  ResultBundle b = start_bundle(cfg);
  const int dim = cfg.model.spin.dim();
  for (const SweepBlock& s : cfg.sweeps) {
    const std::vector<double> grid = linspace(s.start, s.stop, s.points);
    std::vector<std::optional<double>> series = {std::nullopt};
    if (!s.series_key.empty()) {
      series.assign(s.series_values.begin(), s.series_values.end());
    }
    for (const auto& sv : series) {
      ModelParams base = cfg.model;
      std::string name = "sweep_" + s.label;
      if (sv) {
        set_model_param(base, s.series_key, *sv);
        name += fmt::format("_{}_{}", s.series_key, short_number(*sv));
      }
      SweepOptions opts;
      opts.shift = cfg.shift;
      opts.coherences = s.coherences;
      opts.threads = threads;
      const SweepResult r = sweep_shift(s.axis, grid, base, opts);

      const std::string axis = to_string(s.axis);
      Table t = model_table(name, cfg, base, axis);
      t.add_meta("axis", axis);
      t.add_meta("start", s.start);
      t.add_meta("stop", s.stop);
      t.add_meta("points", std::to_string(s.points));
      add_shift_meta(t, cfg.shift);
      t.columns = {axis,     "status",      "omega_s",       "k_x", "k_y",
                   "iterations", "other_roots", "used_homotopy"};
      if (s.coherences) {
        for (int i = 0; i + 1 < dim; ++i) {
          const double m = -cfg.model.spin.value() + i;
          t.columns.push_back(fmt::format("abs_rho_{}_{}", format_m(m),
                                          format_m(m + 1)));
          t.columns.push_back(fmt::format("arg_rho_{}_{}", format_m(m),
                                          format_m(m + 1)));
        }
      }
      std::size_t failures = 0;
      for (const SweepPoint& pt : r.points) {
        std::vector<Cell> row{pt.value};
        if (pt.solution) {
          const ShiftSolution& sol = *pt.solution;
          row.insert(row.end(),
                     {Cell{std::string("ok")}, Cell{sol.omega_s}, Cell{sol.k_x},
                      Cell{sol.k_y}, Cell{static_cast<long long>(sol.iterations)},
                      Cell{static_cast<long long>(sol.other_roots)},
                      Cell{static_cast<long long>(sol.used_homotopy)}});
        } else {
          ++failures;
          row.insert(row.end(), {Cell{pt.failure}, Cell{kNaN}, Cell{kNaN},
                                 Cell{kNaN}, Cell{0LL}, Cell{0LL}, Cell{0LL}});
        }
        if (s.coherences) {
          for (int i = 0; i + 1 < dim; ++i) {
            if (pt.coherences.size() == static_cast<std::size_t>(dim - 1)) {
              row.push_back(pt.coherences[static_cast<std::size_t>(i)].norm);
              row.push_back(pt.coherences[static_cast<std::size_t>(i)].phase);
            } else {
              row.push_back(kNaN);
              row.push_back(kNaN);
            }
          }
        }
        t.rows.push_back(std::move(row));
      }
      // Sign changes of omega_s along the grid (zero crossings such as the
      // phase delay that cancels the shift).
      for (std::size_t i = 1; i < r.points.size(); ++i) {
        const auto& a = r.points[i - 1].solution;
        const auto& c = r.points[i].solution;
        if (!a || !c || !(a->omega_s * c->omega_s < 0.0)) continue;
        const double x0 = r.points[i - 1].value;
        const double x1 = r.points[i].value;
        const double root =
            x0 - a->omega_s * (x1 - x0) / (c->omega_s - a->omega_s);
        b.diagnostics.push_back(
            {name, "omega_s_zero_crossing",
             fmt::format("{} {} {}", format_double(x0), format_double(x1),
                         format_double(root))});
      }
      b.diagnostics.push_back({name, "failures", std::to_string(failures)});
      b.solver_failures += failures;
      b.tables.push_back(std::move(t));
    }
  }
  finish_bundle(b);
  return b;
}

DynamicsAnalysis analyze_dynamics(const DynamicsBlock& block,
                                  const ModelParams& base,
                                  const SpectralBlock& spectral) {
  DynamicsAnalysis a;
  a.params = block.params(base);
  const DensityMatrix rho0 = block.rho0.build(a.params.spin);
  a.trajectory = integrate_feedback(rho0, a.params, block.feedback,
                                    block.t_end, block.output_dt);
  a.late = late_window(a.trajectory, block.late_fraction);
  a.spectrum = spectrum(a.late.k_plus, block.output_dt, spectral.window,
                        spectral.zero_pad);
  a.peaks = find_peaks(a.spectrum, spectral.threshold);
  if (a.peaks.size() >= 2) a.spacing = spacing_analysis(a.peaks);
  a.deviation = kNaN;
  for (const Peak& p : a.peaks.peaks) {
    if (std::isnan(a.deviation) || std::abs(p.freq) < std::abs(a.deviation)) {
      a.deviation = p.freq;
    }
  }
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.late.size(); ++i) {
    const double k = a.late.k_perp(i);
    sum += k;
    sq += k * k;
  }
  const double n = static_cast<double>(a.late.size());
  a.late_k_perp_mean = sum / n;
  a.late_k_perp_std =
      std::sqrt(std::max(0.0, sq / n - a.late_k_perp_mean * a.late_k_perp_mean));
  return a;
}

ResultBundle run_dynamics_spectrum(const ExperimentConfig& cfg,
                                   unsigned threads) {
  if (cfg.dynamics.empty()) {
    throw Error(ErrorKind::kConfig, "dynamics: no [dynamics.*] sections");
  }
  ResultBundle b = start_bundle(cfg);
  std::vector<DynamicsAnalysis> runs(cfg.dynamics.size());
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    runs[i] = analyze_dynamics(cfg.dynamics[i], cfg.model, cfg.spectral);
  });

  Table summary = model_table("dynamics_summary", cfg, cfg.model);
  summary.columns = {"label",          "rho0",           "omega_d",
                     "c_q",            "beta",           "n_peaks",
                     "dominant_freq",  "dominant_amplitude", "deviation",
                     "mean_spacing",   "max_rel_spacing_deviation",
                     "late_k_perp_mean", "late_k_perp_std", "max_trace_error"};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const DynamicsBlock& d = cfg.dynamics[i];
    const DynamicsAnalysis& a = runs[i];
    auto describe = [&](Table& t) {
      t.add_meta("rho0", d.rho0.describe());
      t.add_meta("t_end", d.t_end);
      t.add_meta("output_dt", d.output_dt);
      t.add_meta("late_fraction", d.late_fraction);
      t.add_meta("eps_phase", d.feedback.eps_phase);
      t.add_meta("initial_phi", d.feedback.initial_phi);
      t.add_meta("phase_hold", d.feedback.phase_hold ? "true" : "false");
    };
    const std::string prefix = "dynamics_" + d.label;

    Table traj = model_table(prefix + "_trajectory", cfg, a.params, "omega");
    describe(traj);
    Table body = trajectory_table(a.trajectory);
    traj.columns = std::move(body.columns);
    traj.rows = std::move(body.rows);

    Table spec = model_table(prefix + "_spectrum", cfg, a.params, "omega");
    describe(spec);
    Table sbody = spectrum_table(a.spectrum);
    for (auto& m : sbody.metadata) spec.metadata.push_back(std::move(m));
    spec.add_meta("threshold", cfg.spectral.threshold);
    spec.columns = std::move(sbody.columns);
    spec.rows = std::move(sbody.rows);

    Json doc;
    doc["label"] = d.label;
    doc["threshold"] = cfg.spectral.threshold;
    doc["peaks"] = Json::parse(peaks_to_json(a.peaks));
    doc["deviation"] = std::isnan(a.deviation) ? Json() : Json(a.deviation);
    if (a.spacing) {
      doc["spacing"] = {{"spacings", a.spacing->spacings},
                        {"mean_spacing", a.spacing->mean_spacing},
                        {"max_rel_deviation", a.spacing->max_rel_deviation}};
    } else {
      doc["spacing"] = nullptr;
    }
    b.documents.emplace_back(prefix + "_peaks", doc.dump(2));

    double max_trace = 0.0;
    for (double e : a.trajectory.trace_error) max_trace = std::max(max_trace, e);
    const bool any = a.peaks.size() > 0;
    summary.rows.push_back(
        {d.label, d.rho0.describe(), a.params.omega_d, a.params.c_q,
         a.params.beta, static_cast<long long>(a.peaks.size()),
         any ? a.peaks.dominant().freq : kNaN,
         any ? a.peaks.dominant().amplitude : kNaN, a.deviation,
         a.spacing ? a.spacing->mean_spacing : kNaN,
         a.spacing ? a.spacing->max_rel_deviation : kNaN, a.late_k_perp_mean,
         a.late_k_perp_std, max_trace});
    b.diagnostics.push_back(
        {prefix, "samples", std::to_string(a.trajectory.size())});
    b.diagnostics.push_back({prefix, "max_trace_error", format_double(max_trace)});
    b.tables.push_back(std::move(traj));
    b.tables.push_back(std::move(spec));
  }
  summary.add_meta("window", to_string(cfg.spectral.window));
  summary.add_meta("threshold", cfg.spectral.threshold);
  summary.add_meta("zero_pad", std::to_string(cfg.spectral.zero_pad));
  b.tables.push_back(std::move(summary));
  finish_bundle(b);
  return b;
}

ResultBundle run_properties(const ExperimentConfig& cfg,
                            std::optional<std::uint64_t> seed) {
  ResultBundle b = start_bundle(cfg);
  const std::uint64_t s = seed.value_or(cfg.properties.seed);
  PropertyOptions opts;
  opts.spin = cfg.model.spin;
  const PropertyReport report =
      run_property_suite(s, cfg.properties.count, opts);
  Table summary = property_summary_table(report);
  summary.metadata.insert(summary.metadata.begin(),
                          {"experiment", cfg.name});
  Table violations = property_violation_table(report);
  violations.metadata.insert(violations.metadata.begin(),
                             {"experiment", cfg.name});
  b.tables.push_back(std::move(summary));
  b.tables.push_back(std::move(violations));
  b.property_violations = report.violations.size();
  b.diagnostics.push_back(
      {"properties", "violations", std::to_string(report.violations.size())});
  finish_bundle(b);
  return b;
}

ResultBundle run_all(const ExperimentConfig& cfg, unsigned threads,
                     std::optional<std::uint64_t> seed) {
  ResultBundle b = start_bundle(cfg);
  if (cfg.kcurves) b.merge(run_kcurves(cfg, threads));
  if (!cfg.sweeps.empty()) b.merge(run_shift_sweeps(cfg, threads));
  if (!cfg.dynamics.empty()) b.merge(run_dynamics_spectrum(cfg, threads));
  b.merge(run_properties(cfg, seed));
  finish_bundle(b);
  return b;
}

void write_bundle(const ResultBundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kConfig,
                fmt::format("cannot create '{}': {}", dir, ec.message()));
  }
  auto write_text = [&](const std::string& file, const std::string& text) {
    std::ofstream out(fs::path(dir) / file, std::ios::binary);
    if (!out) throw Error(ErrorKind::kConfig, fmt::format("cannot write '{}'", file));
    out << text;
  };

  for (const Table& t : bundle.tables) {
    t.write_file((fs::path(dir) / (t.name + ".csv")).string());
  }
  for (const auto& [name, text] : bundle.documents) {
    write_text(name + ".json", text + "\n");
  }

  Table diag;
  diag.name = "diagnostics";
  diag.add_meta("experiment", bundle.experiment);
  diag.columns = {"scope", "key", "value"};
  for (const Diagnostic& d : bundle.diagnostics) {
    diag.rows.push_back({d.scope, d.key, d.value});
  }
  diag.write_file((fs::path(dir) / "diagnostics.csv").string());

  Json meta;
  meta["experiment"] = bundle.experiment;
  meta["code_version"] = std::string(version());
  meta["started_utc"] = bundle.started_utc;
  meta["finished_utc"] = bundle.finished_utc;
  Json config = Json::object();
  for (const auto& [k, v] : bundle.metadata) config[k] = v;
  meta["config"] = std::move(config);
  Json files = Json::array();
  for (const Table& t : bundle.tables) files.push_back(t.name + ".csv");
  for (const auto& d : bundle.documents) files.push_back(d.first + ".json");
  meta["files"] = std::move(files);
  meta["solver_failures"] = bundle.solver_failures;
  meta["property_violations"] = bundle.property_violations;
  write_text("metadata.json", meta.dump(2) + "\n");
}

}  // namespace qgyro
