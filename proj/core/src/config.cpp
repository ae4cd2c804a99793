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

#include "qgyro/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "qgyro/error.hpp"
#include "qgyro/table.hpp"

namespace qgyro {
namespace {

using boost::property_tree::ptree;

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::kConfig, msg);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  double value = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) {
    config_error(fmt::format("{}: '{}' is not a number", where, raw));
  }
  return value;
}

long long parse_int(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  long long value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) {
    config_error(fmt::format("{}: '{}' is not an integer", where, raw));
  }
  return value;
}

bool parse_bool(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  config_error(fmt::format("{}: '{}' is not a boolean", where, raw));
}

std::vector<double> parse_list(const std::string& raw,
                               const std::string& where) {
  std::vector<double> out;
  if (trim(raw).empty()) return out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, where));
  return out;
}

/// Section view that remembers which keys were read so leftovers can be
/// reported as typos.
class Section {
 public:
  Section(std::string name, const ptree& tree)
      : name_(std::move(name)), tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    auto it = tree_.find(key);
    if (it == tree_.not_found()) return std::nullopt;
    return trim(it->second.data());
  }
  std::string where(const std::string& key) const {
    return fmt::format("[{}] {}", name_, key);
  }
  std::optional<double> opt_double(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return parse_double(*v, where(key));
  }
  double get_double(const std::string& key, double fallback) {
    return opt_double(key).value_or(fallback);
  }
  double require_double(const std::string& key) {
    auto v = opt_double(key);
    if (!v) config_error(fmt::format("missing required key {}", where(key)));
    return *v;
  }
  long long get_int(const std::string& key, long long fallback) {
    auto v = raw(key);
    return v ? parse_int(*v, where(key)) : fallback;
  }
  bool get_bool(const std::string& key, bool fallback) {
    auto v = raw(key);
    return v ? parse_bool(*v, where(key)) : fallback;
  }
  std::string get_string(const std::string& key, const std::string& fallback) {
    return raw(key).value_or(fallback);
  }
  std::optional<std::vector<double>> opt_list(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return parse_list(*v, where(key));
  }
  void finish() const {
    for (const auto& [key, value] : tree_) {
      if (!used_.count(key)) {
        config_error(fmt::format("unknown key {}", where(key)));
      }
    }
  }

 private:
  std::string name_;
  const ptree& tree_;
  std::set<std::string> used_;
};

SpinQuantumNumber parse_spin(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  const auto slash = s.find('/');
  long long two_k = 0;
  if (slash == std::string::npos) {
    two_k = 2 * parse_int(s, where);
  } else {
    if (trim(s.substr(slash + 1)) != "2") {
      config_error(fmt::format("{}: spin must be n or n/2", where));
    }
    two_k = parse_int(s.substr(0, slash), where);
  }
  if (two_k < 1 || two_k > 20) {
    config_error(fmt::format("{}: spin out of range", where));
  }
  return SpinQuantumNumber(static_cast<int>(two_k));
}

void parse_model(Section& sec, ExperimentConfig& cfg) {
  ModelParams& p = cfg.model;
  if (auto spin = sec.raw("spin")) p.spin = parse_spin(*spin, sec.where("spin"));
  p.omega = sec.get_double("omega", 0.0);
  p.c_q = sec.get_double("c_q", 0.0);
  p.omega_d = sec.get_double("omega_d", 0.0);
  p.beta = sec.get_double("beta", 0.0);
  p.gamma1 = sec.require_double("gamma1");
  p.gamma2 = sec.require_double("gamma2");
  // No default: every output must state the pumping rate it used.
  p.gamma_p = sec.require_double("gamma_p");
}

void parse_solver(Section& sec, ExperimentConfig& cfg) {
  ShiftOptions& s = cfg.shift;
  s.scan_points = static_cast<int>(sec.get_int("scan_points", s.scan_points));
  s.homotopy_steps =
      static_cast<int>(sec.get_int("homotopy_steps", s.homotopy_steps));
  s.ky_tolerance = sec.get_double("ky_tolerance", s.ky_tolerance);
  s.max_iterations =
      static_cast<int>(sec.get_int("max_iterations", s.max_iterations));
  s.steady.min_gap_ratio = sec.get_double("min_gap_ratio", s.steady.min_gap_ratio);
  s.steady.negativity_tol =
      sec.get_double("negativity_tol", s.steady.negativity_tol);
  auto lo = sec.opt_double("bracket_lo");
  auto hi = sec.opt_double("bracket_hi");
  if (lo.has_value() != hi.has_value()) {
    config_error("[solver] bracket_lo and bracket_hi must be given together");
  }
  if (lo) {
    if (!(*lo < *hi)) config_error("[solver] bracket_lo must be < bracket_hi");
    s.bracket = std::make_pair(*lo, *hi);
  }
  if (s.scan_points < 3) config_error("[solver] scan_points must be >= 3");
  if (s.homotopy_steps < 1) config_error("[solver] homotopy_steps must be >= 1");
}

void parse_kcurves(Section& sec, ExperimentConfig& cfg) {
  KCurvesBlock k;
  auto list = sec.opt_list("c_q_values");
  if (!list || list->empty()) {
    config_error("[kcurves] c_q_values must list at least one value");
  }
  k.c_q_values = *list;
  k.omega_start = sec.get_double("omega_start", k.omega_start);
  k.omega_stop = sec.get_double("omega_stop", k.omega_stop);
  k.omega_points = static_cast<int>(sec.get_int("omega_points", k.omega_points));
  if (k.omega_points < 2 || !(k.omega_start < k.omega_stop)) {
    config_error("[kcurves] omega grid must be increasing with >= 2 points");
  }
  cfg.kcurves = std::move(k);
}

void parse_sweep(Section& sec, const std::string& label,
                 ExperimentConfig& cfg) {
  SweepBlock s;
  s.label = label;
  s.axis = parse_sweep_axis(sec.get_string("axis", ""));
  s.start = sec.require_double("start");
  s.stop = sec.require_double("stop");
  s.points = static_cast<int>(sec.get_int("points", 0));
  if (s.points < 2 || !(s.start < s.stop)) {
    config_error(fmt::format("[sweep.{}] grid must be increasing with >= 2 points",
                             label));
  }
  s.series_key = sec.get_string("series_key", "");
  if (auto v = sec.opt_list("series_values")) s.series_values = *v;
  if (s.series_key.empty() != s.series_values.empty()) {
    config_error(fmt::format(
        "[sweep.{}] series_key and series_values must be given together",
        label));
  }
  if (!s.series_key.empty()) {
    ModelParams probe;
    set_model_param(probe, s.series_key, 0.0);  // validates the key
    if (s.series_key == to_string(s.axis)) {
      config_error(fmt::format("[sweep.{}] series_key equals the sweep axis",
                               label));
    }
  }
  s.coherences = sec.get_bool("coherences", false);
  cfg.sweeps.push_back(std::move(s));
}

Operator parse_matrix(const std::vector<double>& re,
                      const std::vector<double>& im, int dim,
                      const std::string& where) {
  const auto n = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  if (re.size() != n || (!im.empty() && im.size() != n)) {
    config_error(fmt::format("{}: expected {} row-major entries", where, n));
  }
  Operator m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const auto k = static_cast<std::size_t>(i * dim + j);
      m(i, j) = Complex(re[k], im.empty() ? 0.0 : im[k]);
    }
  }
  return m;
}

void parse_dynamics(Section& sec, const std::string& label,
                    ExperimentConfig& cfg) {
  DynamicsBlock d;
  d.label = label;
  const std::string kind = sec.get_string("rho0", "basis");
  if (kind == "basis") {
    d.rho0.kind = InitialStateKind::kBasis;
    d.rho0.m = sec.get_double("m", cfg.model.spin.value());
  } else if (kind == "mixed") {
    d.rho0.kind = InitialStateKind::kMixed;
  } else if (kind == "matrix") {
    d.rho0.kind = InitialStateKind::kMatrix;
    auto re = sec.opt_list("rho0_real");
    if (!re) config_error(fmt::format("[dynamics.{}] rho0_real missing", label));
    auto im = sec.opt_list("rho0_imag").value_or(std::vector<double>{});
    d.rho0.matrix = parse_matrix(*re, im, cfg.model.spin.dim(),
                                 fmt::format("[dynamics.{}] rho0", label));
  } else {
    config_error(fmt::format("[dynamics.{}] rho0 must be basis, mixed or matrix",
                             label));
  }
  d.omega_d = sec.opt_double("omega_d");
  d.c_q = sec.opt_double("c_q");
  d.beta = sec.opt_double("beta");
  d.t_end = sec.get_double("t_end", d.t_end);
  d.output_dt = sec.get_double("output_dt", d.output_dt);
  d.late_fraction = sec.get_double("late_fraction", d.late_fraction);
  d.feedback.eps_phase = sec.get_double("eps_phase", d.feedback.eps_phase);
  d.feedback.initial_phi = sec.get_double("initial_phi", d.feedback.initial_phi);
  d.feedback.phase_hold = sec.get_bool("phase_hold", d.feedback.phase_hold);
  if (!(d.t_end > 0.0) || !(d.output_dt > 0.0) || d.output_dt > d.t_end) {
    config_error(fmt::format("[dynamics.{}] need 0 < output_dt <= t_end", label));
  }
  if (!(d.late_fraction > 0.0) || d.late_fraction > 1.0) {
    config_error(fmt::format("[dynamics.{}] late_fraction must lie in (0, 1]",
                             label));
  }
  cfg.dynamics.push_back(std::move(d));
}

void parse_spectral(Section& sec, ExperimentConfig& cfg) {
  SpectralBlock& s = cfg.spectral;
  s.window = parse_window(sec.get_string("window", to_string(s.window)));
  s.threshold = sec.get_double("threshold", s.threshold);
  s.zero_pad = static_cast<int>(sec.get_int("zero_pad", s.zero_pad));
  if (!(s.threshold > 0.0 && s.threshold < 1.0)) {
    config_error("[spectral] threshold must lie in (0, 1)");
  }
  if (s.zero_pad < 1) config_error("[spectral] zero_pad must be >= 1");
}

void parse_properties(Section& sec, ExperimentConfig& cfg) {
  const long long seed = sec.get_int("seed", 0);
  const long long count = sec.get_int("count", cfg.properties.count);
  if (seed < 0) config_error("[properties] seed must be >= 0");
  if (count < 0) config_error("[properties] count must be >= 0");
  cfg.properties.seed = static_cast<unsigned long long>(seed);
  cfg.properties.count = static_cast<int>(count);
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

void set_model_param(ModelParams& params, const std::string& key,
                     double value) {
  if (key == "omega") params.omega = value;
  else if (key == "c_q") params.c_q = value;
  else if (key == "omega_d") params.omega_d = value;
  else if (key == "beta") params.beta = value;
  else if (key == "gamma1") params.gamma1 = value;
  else if (key == "gamma2") params.gamma2 = value;
  else if (key == "gamma_p") params.gamma_p = value;
  else config_error(fmt::format("unknown model parameter '{}'", key));
}

std::string format_spin(SpinQuantumNumber spin) {
  return spin.two_k() % 2 == 0 ? std::to_string(spin.two_k() / 2)
                               : fmt::format("{}/2", spin.two_k());
}

std::vector<std::pair<std::string, std::string>> model_metadata(
    const ModelParams& p) {
  return {
      {"spin", format_spin(p.spin)},     {"omega", format_double(p.omega)},
      {"c_q", format_double(p.c_q)},     {"omega_d", format_double(p.omega_d)},
      {"beta", format_double(p.beta)},   {"gamma1", format_double(p.gamma1)},
      {"gamma2", format_double(p.gamma2)}, {"gamma_p", format_double(p.gamma_p)},
  };
}

DensityMatrix InitialState::build(SpinQuantumNumber spin) const {
  switch (kind) {
    case InitialStateKind::kBasis:
      return DensityMatrix::basis_state(spin, m);
    case InitialStateKind::kMixed:
      return DensityMatrix::maximally_mixed(spin);
    case InitialStateKind::kMatrix:
      if (matrix.rows() != spin.dim() || matrix.cols() != spin.dim()) {
        throw Error(ErrorKind::kConfig, "initial matrix has the wrong size");
      }
      return DensityMatrix(matrix);
  }
  throw Error(ErrorKind::kConfig, "bad initial state");
}

std::string InitialState::describe() const {
  switch (kind) {
    case InitialStateKind::kBasis:
      return fmt::format("basis m={}", m);
    case InitialStateKind::kMixed:
      return "mixed I/d";
    case InitialStateKind::kMatrix: {
      std::string s = "matrix";
      for (int i = 0; i < matrix.rows(); ++i) {
        for (int j = 0; j < matrix.cols(); ++j) {
          s += fmt::format(" ({},{})", format_double(matrix(i, j).real()),
                           format_double(matrix(i, j).imag()));
        }
      }
      return s;
    }
  }
  return "?";
}

ModelParams DynamicsBlock::params(const ModelParams& base) const {
  ModelParams p = base;
  p.omega = 0.0;
  if (omega_d) p.omega_d = *omega_d;
  if (c_q) p.c_q = *c_q;
  if (beta) p.beta = *beta;
  return p;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::snapshot()
    const {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string k, std::string v) {
    out.emplace_back(std::move(k), std::move(v));
  };
  add("experiment.name", name);
  add("experiment.source", source);
  for (auto& [k, v] : model_metadata(model)) add("model." + k, v);
  add("solver.scan_points", std::to_string(shift.scan_points));
  add("solver.homotopy_steps", std::to_string(shift.homotopy_steps));
  add("solver.ky_tolerance", format_double(shift.ky_tolerance));
  add("solver.max_iterations", std::to_string(shift.max_iterations));
  add("solver.min_gap_ratio", format_double(shift.steady.min_gap_ratio));
  add("solver.negativity_tol", format_double(shift.steady.negativity_tol));
  add("solver.bracket",
      shift.bracket ? fmt::format("{} {}", format_double(shift.bracket->first),
                                  format_double(shift.bracket->second))
                    : "auto");
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += format_double(v[i]);
    }
    return s;
  };
  if (kcurves) {
    add("kcurves.c_q_values", list(kcurves->c_q_values));
    add("kcurves.omega_start", format_double(kcurves->omega_start));
    add("kcurves.omega_stop", format_double(kcurves->omega_stop));
    add("kcurves.omega_points", std::to_string(kcurves->omega_points));
  }
  for (const SweepBlock& s : sweeps) {
    const std::string p = "sweep." + s.label + ".";
    add(p + "axis", to_string(s.axis));
    add(p + "start", format_double(s.start));
    add(p + "stop", format_double(s.stop));
    add(p + "points", std::to_string(s.points));
    add(p + "series_key", s.series_key);
    add(p + "series_values", list(s.series_values));
    add(p + "coherences", s.coherences ? "true" : "false");
  }
  for (const DynamicsBlock& d : dynamics) {
    const std::string p = "dynamics." + d.label + ".";
    add(p + "rho0", d.rho0.describe());
    for (auto& [k, v] : model_metadata(d.params(model))) add(p + k, v);
    add(p + "t_end", format_double(d.t_end));
    add(p + "output_dt", format_double(d.output_dt));
    add(p + "late_fraction", format_double(d.late_fraction));
    add(p + "eps_phase", format_double(d.feedback.eps_phase));
    add(p + "initial_phi", format_double(d.feedback.initial_phi));
    add(p + "phase_hold", d.feedback.phase_hold ? "true" : "false");
  }
  add("spectral.window", to_string(spectral.window));
  add("spectral.threshold", format_double(spectral.threshold));
  add("spectral.zero_pad", std::to_string(spectral.zero_pad));
  add("properties.seed", std::to_string(properties.seed));
  add("properties.count", std::to_string(properties.count));
  add("output.dir", output_dir);
  return out;
}

ExperimentConfig parse_config(const std::string& text,
                              const std::string& source) {
  ptree tree;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(fmt::format("{}: {}", source, e.message()));
  }

  ExperimentConfig cfg;
  cfg.source = source;
  // [model] first: later sections depend on the spin.
  auto model_it = tree.find("model");
  if (model_it == tree.not_found()) config_error("missing [model] section");
  {
    Section sec("model", model_it->second);
    parse_model(sec, cfg);
    sec.finish();
  }
  try {
    cfg.model.validate();
  } catch (const Error& e) {
    config_error(fmt::format("[model] {}", e.what()));
  }

  for (const auto& [name, body] : tree) {
    if (!body.data().empty()) {
      config_error(fmt::format("key '{}' outside any section", name));
    }
    Section sec(name, body);
    if (name == "model") {
      continue;
    } else if (name == "experiment") {
      cfg.name = sec.get_string("name", cfg.name);
    } else if (name == "solver") {
      parse_solver(sec, cfg);
    } else if (name == "kcurves") {
      parse_kcurves(sec, cfg);
    } else if (starts_with(name, "sweep.")) {
      parse_sweep(sec, name.substr(6), cfg);
    } else if (starts_with(name, "dynamics.")) {
      parse_dynamics(sec, name.substr(9), cfg);
    } else if (name == "spectral") {
      parse_spectral(sec, cfg);
    } else if (name == "properties") {
      parse_properties(sec, cfg);
    } else if (name == "output") {
      cfg.output_dir = sec.get_string("dir", cfg.output_dir);
    } else {
      config_error(fmt::format("unknown section [{}]", name));
    }
    sec.finish();
  }
  for (const DynamicsBlock& d : cfg.dynamics) {
    try {
      d.params(cfg.model).validate();
      d.feedback.validate();
      (void)d.rho0.build(cfg.model.spin);
    } catch (const Error& e) {
      config_error(fmt::format("[dynamics.{}] {}", d.label, e.what()));
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error(fmt::format("cannot open config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace qgyro
