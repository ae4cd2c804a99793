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

#include "qgyro/properties.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "qgyro/error.hpp"
#include "qgyro/steady_state.hpp"

namespace qgyro {
namespace {

// Uniform doubles built from raw engine output so the stream does not
// depend on the standard library's distribution implementation.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double unit() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// (-pi, pi]
  double angle() {
    return std::numbers::pi - 2.0 * std::numbers::pi * unit();
  }

 private:
  std::mt19937_64 engine_;
};

ModelParams sample_params(Sampler& s, const PropertySampling& r,
                          SpinQuantumNumber spin) {
  ModelParams p;
  p.spin = spin;
  p.gamma1 = s.uniform(r.gamma1_lo, r.gamma1_hi);
  p.gamma2 = s.uniform(r.gamma2_lo, r.gamma2_hi);
  p.gamma_p = s.uniform(r.gamma_p_lo, r.gamma_p_frac * p.gamma1);
  p.omega = s.uniform(-r.omega_max, r.omega_max);
  p.c_q = s.uniform(-r.c_q_max, r.c_q_max);
  p.omega_d = s.uniform(r.omega_d_lo, r.omega_d_hi);
  p.beta = s.angle();
  return p;
}

Operator random_state(Sampler& s, int dim) {
  Operator a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      a(i, j) = Complex(s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0));
    }
  }
  Operator rho = a * a.adjoint();
  return rho / rho.trace().real();
}

Operator z_rotation(SpinQuantumNumber spin, double theta) {
  Operator u = Operator::Zero(spin.dim(), spin.dim());
  for (int i = 0; i < spin.dim(); ++i) {
    u(i, i) = std::exp(Complex(0.0, theta * spin.m_of_index(i)));
  }
  return u;
}

struct Moments {
  Complex kx, ky, kplus;
};

class Recorder {
 public:
  Recorder(PropertyReport& report, const PropertyOptions& opts)
      : report_(report) {
    for (const std::string& name : property_check_names()) {
      const bool generator = name.rfind("rhs_", 0) == 0 ||
                             name == "superop_vs_direct";
      index_[name] = report_.checks.size();
      report_.checks.push_back(PropertyCheckSummary{
          name, generator ? opts.generator_tol : opts.symmetry_tol, 0, 0,
          0.0});
    }
  }

  void record(const std::string& name, int sample, double error,
              const ModelParams& p, double theta, std::string detail = {}) {
    PropertyCheckSummary& c = report_.checks[index_.at(name)];
    ++c.evaluations;
    const bool bad = !(error <= c.tolerance);  // NaN counts as a violation
    if (std::isfinite(error)) c.max_error = std::max(c.max_error, error);
    if (bad) {
      ++c.violations;
      report_.violations.push_back(
          PropertyViolation{name, sample, error, p, theta, std::move(detail)});
    }
  }

 private:
  PropertyReport& report_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace

const PropertyCheckSummary& PropertyReport::check(
    const std::string& name) const {
  for (const auto& c : checks) {
    if (c.check == name) return c;
  }
  throw Error(ErrorKind::kInvalidArgument,
              fmt::format("no property check named '{}'", name));
}

PropertyReport run_property_suite(std::uint64_t seed, int count,
                                  const PropertyOptions& options) {
  if (count < 0) {
    throw Error(ErrorKind::kInvalidArgument, "property count must be >= 0");
  }
  PropertyReport report;
  report.seed = seed;
  report.count = count;
  Recorder rec(report, options);
  Sampler sampler(seed);
  const SpinOperators ops = options.ops_factory(options.spin);
  const int dim = options.spin.dim();
  const SteadyStateOptions steady_opts;

  auto moments = [&](const ModelParams& p) {
    const SteadyStateResult r = steady_state(p, ops, steady_opts);
    return Moments{expectation(ops.kx, r.rho_s), expectation(ops.ky, r.rho_s),
                   expectation(ops.kplus, r.rho_s)};
  };

  for (int n = 0; n < count; ++n) {
    const ModelParams p = sample_params(sampler, options.sampling, options.spin);
    const double theta = sampler.angle();
    const Operator rho = random_state(sampler, dim);

    // Generator-level checks on an arbitrary state.
    const Operator rhs = rhs_apply(rho, p, ops);
    rec.record("rhs_trace", n, std::abs(rhs.trace()), p, theta);
    rec.record("rhs_hermiticity", n, max_abs(rhs - rhs.adjoint()), p, theta);
    const Superoperator lv = liouvillian_matrix(p, ops);
    rec.record("superop_vs_direct", n, max_abs(lv.apply(rho) - rhs), p, theta);
    {
      const Operator u = z_rotation(options.spin, theta);
      ModelParams shifted = p;
      shifted.beta = p.beta - theta;
      const Operator lhs = rhs_apply(u * rho * u.adjoint(), shifted, ops);
      rec.record("rhs_u1_covariance", n, max_abs(lhs - u * rhs * u.adjoint()),
                 p, theta);
    }

    // Steady-state symmetries.
    ModelParams mirror = p;
    mirror.omega = -p.omega;
    mirror.c_q = -p.c_q;
    mirror.beta = -p.beta;
    ModelParams flipped = p;
    flipped.omega_d = -p.omega_d;
    ModelParams rotated = p;
    rotated.beta = wrap_phase(p.beta + theta);

    Moments base, mir, flip, rot;
    try {
      base = moments(p);
      mir = moments(mirror);
      flip = moments(flipped);
      rot = moments(rotated);
    } catch (const Error& e) {
      rec.record("steady_solve", n, std::numeric_limits<double>::quiet_NaN(),
                 p, theta, e.what());
      continue;
    }
    rec.record("steady_solve", n, 0.0, p, theta);
    rec.record("kx_time_reversal", n, std::abs(base.kx - mir.kx), p, theta);
    // Compared as complex numbers: a broken K_y shows up in the imaginary
    // part even when the real parts still cancel.
    rec.record("ky_time_reversal", n, std::abs(base.ky + mir.ky), p, theta);
    rec.record("k_drive_flip", n,
               std::max(std::abs(base.kx + flip.kx), std::abs(base.ky + flip.ky)),
               p, theta);
    rec.record("steady_phase_u1", n,
               std::abs(rot.kplus - std::exp(Complex(0.0, theta)) * base.kplus),
               p, theta);
  }
  return report;
}

Table property_summary_table(const PropertyReport& report) {
  Table t;
  t.name = "properties_summary";
  t.add_meta("seed", std::to_string(report.seed));
  t.add_meta("count", std::to_string(report.count));
  t.columns = {"check", "tolerance", "evaluations", "violations", "max_error"};
  for (const auto& c : report.checks) {
    t.rows.push_back({c.check, c.tolerance,
                      static_cast<long long>(c.evaluations),
                      static_cast<long long>(c.violations), c.max_error});
  }
  return t;
}

Table property_violation_table(const PropertyReport& report) {
  Table t;
  t.name = "properties_violations";
  t.add_meta("seed", std::to_string(report.seed));
  t.add_meta("count", std::to_string(report.count));
  t.columns = {"check",   "sample", "error",  "two_k",   "omega",
               "c_q",     "omega_d", "beta",  "gamma1", "gamma2",
               "gamma_p", "theta",  "detail"};
  for (const auto& v : report.violations) {
    const ModelParams& p = v.params;
    t.rows.push_back({v.check, static_cast<long long>(v.sample), v.error,
                      static_cast<long long>(p.spin.two_k()), p.omega, p.c_q,
                      p.omega_d, p.beta, p.gamma1, p.gamma2, p.gamma_p, v.theta,
                      v.detail});
  }
  return t;
}

}  // namespace qgyro
