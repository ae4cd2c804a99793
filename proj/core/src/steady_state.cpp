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

#include "qgyro/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "qgyro/error.hpp"
#include "qgyro/parallel.hpp"

namespace qgyro {

SteadyStateResult steady_state(const ModelParams& params,
                               const SpinOperators& ops,
                               const SteadyStateOptions& opts) {
  const Superoperator gen = liouvillian_matrix(params, ops);
  const int d = gen.dim();
  const auto n = gen.matrix().rows();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gen.matrix(), Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();  // descending
  const double sigma_max = sigma(0);
  const double sigma_min = sigma(n - 1);
  const double sigma_next = sigma(n - 2);
  const double gap = sigma_min > 0.0
                         ? sigma_next / sigma_min
                         : (sigma_next > 0.0
                                ? std::numeric_limits<double>::infinity()
                                : 0.0);
  int null_dim = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma(i) <= 1e-9 * sigma_max) ++null_dim;
  }
  if (!(gap > opts.min_gap_ratio) || null_dim != 1) {
    throw Error(ErrorKind::kNullSpaceDegenerate,
                fmt::format("null space not one-dimensional (sigma_min = "
                            "{:.3e}, next = {:.3e}, null_dim = {})",
                            sigma_min, sigma_next, null_dim));
  }

  Operator rho = unvectorize(svd.matrixV().col(n - 1), d);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14) {
    throw Error(ErrorKind::kNullSpaceDegenerate,
                "null vector is traceless; cannot normalize");
  }
  rho /= tr;
  rho = (0.5 * (rho + rho.adjoint())).eval();

  Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -opts.negativity_tol) {
    throw Error(ErrorKind::kNotPositive,
                fmt::format("steady state has eigenvalue {:.3e}", min_eig));
  }

  const double residual =
      (gen.matrix() * vectorize(rho)).cwiseAbs().maxCoeff();
  DensityTolerance tol;
  tol.min_eigenvalue = -opts.negativity_tol;
  tol.trace = 1e-12;
  DensityMatrix state(std::move(rho), tol);
  const double k_x = expectation(ops.kx, state).real();
  const double k_y = expectation(ops.ky, state).real();
  return SteadyStateResult{std::move(state), k_x,      k_y,     residual,
                           sigma_max,        gap,      null_dim};
}

SteadyStateResult steady_state(const ModelParams& params,
                               const SteadyStateOptions& opts) {
  return steady_state(params, spin_operators(params.spin), opts);
}

void require_monotone_grid(std::span<const double> grid) {
  if (grid.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "grid is empty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("grid not strictly increasing at index {}", i));
    }
  }
}

std::vector<double> linspace(double start, double stop, int points) {
  if (points < 1) {
    throw Error(ErrorKind::kInvalidArgument, "linspace needs >= 1 point");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = start + step * i;
  out.back() = stop;
  return out;
}

std::vector<KCurvePoint> k_curves(const ModelParams& base,
                                  std::span<const double> omega_grid,
                                  unsigned threads) {
  require_monotone_grid(omega_grid);
  const SpinOperators ops = spin_operators(base.spin);
  std::vector<KCurvePoint> out(omega_grid.size());
  parallel_for(omega_grid.size(), threads, [&](std::size_t i) {
    ModelParams p = base;
    p.omega = omega_grid[i];
    const SteadyStateResult ss = steady_state(p, ops);
    out[i] = KCurvePoint{p.omega, ss.k_x, ss.k_y};
  });
  return out;
}

namespace {

struct KSample {
  double omega;
  double k_x;
  double k_y;
};

class ShiftProblem {
 public:
  ShiftProblem(const ModelParams& base, const SpinOperators& ops,
               const ShiftOptions& opts)
      : base_(base), ops_(ops), opts_(opts) {}

  KSample sample(double omega) const {
    ModelParams p = base_;
    p.omega = omega;
    const SteadyStateResult ss = steady_state(p, ops_, opts_.steady);
    return KSample{omega, ss.k_x, ss.k_y};
  }

  std::vector<KSample> scan(double lo, double hi, int points) const {
    std::vector<KSample> out;
    out.reserve(static_cast<std::size_t>(points));
    for (double w : linspace(lo, hi, points)) out.push_back(sample(w));
    return out;
  }

  /// Refines a sign change of k_y on [a, b].
  KSample refine(const KSample& a, const KSample& b, int& iterations) const {
    auto f = [this](double w) { return sample(w).k_y; };
    const auto tol = [](double x, double y) {
      const double scale = std::max(std::abs(x), std::abs(y));
      return std::abs(y - x) <=
             std::max(4.0 * std::numeric_limits<double>::epsilon() * scale,
                      1e-15);
    };
    std::uintmax_t iters = static_cast<std::uintmax_t>(opts_.max_iterations);
    const auto [x0, x1] = boost::math::tools::toms748_solve(
        f, a.omega, b.omega, a.k_y, b.k_y, tol, iters);
    iterations += static_cast<int>(iters);
    KSample best = sample(0.5 * (x0 + x1));
    for (double x : {x0, x1}) {
      if (std::abs(best.k_y) <= opts_.ky_tolerance) break;
      const KSample s = sample(x);
      if (std::abs(s.k_y) < std::abs(best.k_y)) best = s;
    }
    return best;
  }

  /// All roots of k_y found in a scan, refined.
  std::vector<KSample> roots_in(const std::vector<KSample>& grid,
                                int& iterations) const {
    std::vector<KSample> roots;
    const double tol = opts_.ky_tolerance;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid[i].k_y) <= tol) {
        roots.push_back(grid[i]);
        continue;
      }
      if (i + 1 < grid.size() && std::abs(grid[i + 1].k_y) > tol &&
          std::signbit(grid[i].k_y) != std::signbit(grid[i + 1].k_y)) {
        roots.push_back(refine(grid[i], grid[i + 1], iterations));
      }
    }
    return roots;
  }

  const ModelParams& base() const { return base_; }
  const ShiftOptions& options() const { return opts_; }

 private:
  ModelParams base_;
  const SpinOperators& ops_;
  ShiftOptions opts_;
};

std::pair<double, double> default_bracket(const ModelParams& p) {
  double half = (p.spin.dim()) * std::abs(p.c_q) + 5.0 * p.max_rate();
  if (!(half > 0.0)) half = std::max(std::abs(p.omega_d), 1.0);
  return {-half, half};
}

std::size_t count_valid(const std::vector<KSample>& roots) {
  return static_cast<std::size_t>(std::count_if(
      roots.begin(), roots.end(), [](const KSample& s) { return s.k_x > 0.0; }));
}

/// Valid root nearest `guess`, widening a local window until one appears.
std::optional<KSample> track_root(const ShiftProblem& problem, double guess,
                                  double width, double limit, int& iterations) {
  for (double h = width; h <= limit; h *= 2.0) {
    const auto grid = problem.scan(guess - h, guess + h, 9);
    const auto roots = problem.roots_in(grid, iterations);
    std::optional<KSample> best;
    for (const KSample& r : roots) {
      if (r.k_x <= 0.0) continue;
      if (!best || std::abs(r.omega - guess) < std::abs(best->omega - guess)) {
        best = r;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace

ShiftSolution solve_shift(const ModelParams& base, const SpinOperators& ops,
                          const ShiftOptions& opts) {
  base.validate();
  if (base.omega_d == 0.0) {
    throw Error(ErrorKind::kInvalidArgument,
                "solve_shift requires a nonzero drive amplitude");
  }
  if (opts.scan_points < 3) {
    throw Error(ErrorKind::kInvalidArgument, "scan needs >= 3 points");
  }
  const auto [lo, hi] = opts.bracket.value_or(default_bracket(base));
  if (!(hi > lo)) {
    throw Error(ErrorKind::kInvalidArgument, "empty omega bracket");
  }

  ShiftProblem problem(base, ops, opts);
  ShiftSolution out;
  out.bracket = {lo, hi};

  const auto grid = problem.scan(lo, hi, opts.scan_points);
  const auto roots = problem.roots_in(grid, out.iterations);
  if (roots.empty()) {
    throw Error(ErrorKind::kNoBracket,
                fmt::format("k_y has no sign change on [{}, {}]", lo, hi));
  }
  const std::size_t valid = count_valid(roots);
  if (valid == 0) {
    throw Error(ErrorKind::kSolutionRejected,
                fmt::format("all {} roots of k_y have k_x <= 0", roots.size()));
  }

  KSample chosen{};
  if (valid == 1) {
    chosen = *std::find_if(roots.begin(), roots.end(),
                           [](const KSample& s) { return s.k_x > 0.0; });
  } else {
    // Several valid roots: follow the branch that starts at C_Q = 0.
    out.used_homotopy = true;
    const double step_width = (hi - lo) / (opts.scan_points - 1);
    ModelParams p0 = base;
    p0.c_q = 0.0;
    ShiftOptions start_opts = opts;
    start_opts.bracket.reset();
    start_opts.homotopy_steps = 0;
    ShiftSolution start = solve_shift(p0, ops, start_opts);
    out.iterations += start.iterations;
    double current = start.omega_s;
    std::optional<KSample> tracked;
    const int steps = std::max(opts.homotopy_steps, 1);
    for (int j = 1; j <= steps; ++j) {
      ModelParams pj = base;
      pj.c_q = base.c_q * static_cast<double>(j) / steps;
      ShiftProblem stage(pj, ops, opts);
      tracked = track_root(stage, current, step_width, hi - lo, out.iterations);
      if (!tracked) {
        throw Error(ErrorKind::kNoBracket,
                    fmt::format("lost the root during C_Q continuation at "
                                "C_Q = {}",
                                pj.c_q));
      }
      current = tracked->omega;
    }
    chosen = *tracked;
  }

  if (std::abs(chosen.k_y) > opts.ky_tolerance) {
    throw Error(ErrorKind::kSolutionRejected,
                fmt::format("root refinement stalled at |k_y| = {:.3e}",
                            std::abs(chosen.k_y)));
  }
  if (!(chosen.k_x > 0.0)) {
    throw Error(ErrorKind::kSolutionRejected,
                fmt::format("k_x = {} at the root is not positive", chosen.k_x));
  }
  out.omega_s = chosen.omega;
  out.k_x = chosen.k_x;
  out.k_y = chosen.k_y;
  out.other_roots = static_cast<int>(valid) - 1;
  return out;
}

ShiftSolution solve_shift(const ModelParams& base, const ShiftOptions& opts) {
  return solve_shift(base, spin_operators(base.spin), opts);
}

std::vector<Coherence> coherence_decomposition(const DensityMatrix& rho,
                                               SpinQuantumNumber spin) {
  if (rho.dim() != spin.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "coherence_decomposition: state and spin disagree");
  }
  std::vector<Coherence> out;
  for (int i = spin.dim() - 1; i >= 1; --i) {
    // index i holds m, index i-1 holds m+1
    const Complex c = rho.matrix()(i, i - 1);
    out.push_back(Coherence{spin.m_of_index(i), std::abs(c), std::arg(c)});
  }
  return out;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kCQ: return "c_q";
    case SweepAxis::kOmegaD: return "omega_d";
    case SweepAxis::kBeta: return "beta";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "c_q") return SweepAxis::kCQ;
  if (name == "omega_d") return SweepAxis::kOmegaD;
  if (name == "beta") return SweepAxis::kBeta;
  throw Error(ErrorKind::kConfig, fmt::format("unknown sweep axis '{}'", name));
}

void set_axis(ModelParams& params, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kCQ: params.c_q = value; break;
    case SweepAxis::kOmegaD: params.omega_d = value; break;
    case SweepAxis::kBeta: params.beta = value; break;
  }
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(),
                    [](const SweepPoint& p) { return !p.solution; }));
}

SweepResult sweep_shift(SweepAxis axis, std::span<const double> grid,
                        const ModelParams& base, const SweepOptions& opts) {
  require_monotone_grid(grid);
  const SpinOperators ops = spin_operators(base.spin);
  SweepResult result;
  result.axis = axis;
  result.points.resize(grid.size());
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    SweepPoint& point = result.points[i];
    point.value = grid[i];
    ModelParams p = base;
    set_axis(p, axis, grid[i]);
    try {
      point.solution = solve_shift(p, ops, opts.shift);
      if (opts.coherences) {
        p.omega = point.solution->omega_s;
        point.coherences =
            coherence_decomposition(steady_state(p, ops).rho_s, p.spin);
      }
    } catch (const Error& e) {
      point.solution.reset();
      point.coherences.clear();
      point.failure = fmt::format("{}: {}", to_string(e.kind()), e.what());
    }
  });
  return result;
}

}  // namespace qgyro
