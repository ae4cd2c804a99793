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

#include "qgyro/dynamics.hpp"

#include <cmath>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "qgyro/error.hpp"

namespace qgyro {

namespace odeint = boost::numeric::odeint;

void FeedbackConfig::validate() const {
  if (!(eps_phase > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "eps_phase must be positive");
  }
  if (!std::isfinite(initial_phi)) {
    throw Error(ErrorKind::kInvalidArgument, "initial_phi must be finite");
  }
}

double Trajectory::dt() const {
  if (times.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "trajectory has < 2 samples");
  }
  return times[1] - times[0];
}

namespace {

using State = std::vector<Complex>;

/// Right-hand side with the drive split by phase:
///   L(chi) = base + e^{i chi} raise + e^{-i chi} lower,  chi = phi' - beta.
class FeedbackSystem {
 public:
  FeedbackSystem(const ModelParams& params, const SpinOperators& ops,
                 const FeedbackConfig& fb)
      : dim_(ops.dim()), beta_(params.beta), fb_(fb), held_phi_(fb.initial_phi) {
    ModelParams static_part = params;
    static_part.omega = 0.0;
    static_part.omega_d = 0.0;
    base_ = liouvillian_matrix(static_part, ops).matrix();
    const Complex drive = params.omega_d / Complex(0.0, 4.0);
    raise_ = drive * commutator_superop(ops.kplus);
    lower_ = -drive * commutator_superop(ops.kminus);
    // Tr(K_+ rho) = sum_ij (K_+)_ij rho_ji = vec(K_+^T) . vec(rho)
    kplus_row_ = vectorize(ops.kplus.transpose()).transpose();
  }

  Complex k_plus(const State& x) const {
    return (kplus_row_ * Map(x)).value();
  }

  void operator()(const State& x, State& dxdt, double /*t*/) {
    const Complex kp = k_plus(x);
    double phi = fb_.initial_phi;
    if (std::abs(kp) >= fb_.eps_phase) {
      phi = -std::arg(kp);
      held_phi_ = phi;
      defined_once_ = true;
    } else if (fb_.phase_hold && defined_once_) {
      phi = held_phi_;
    }
    const Complex e = std::polar(1.0, phi - beta_);
    dxdt.resize(x.size());
    const auto in = Map(x);
    Eigen::Map<Eigen::VectorXcd> out(dxdt.data(),
                                     static_cast<Eigen::Index>(dxdt.size()));
    out.noalias() = base_ * in;
    out.noalias() += e * (raise_ * in);
    out.noalias() += std::conj(e) * (lower_ * in);
  }

  int dim() const { return dim_; }

 private:
  static Eigen::Map<const Eigen::VectorXcd> Map(const State& x) {
    return Eigen::Map<const Eigen::VectorXcd>(
        x.data(), static_cast<Eigen::Index>(x.size()));
  }

  int dim_;
  double beta_;
  FeedbackConfig fb_;
  double held_phi_;
  bool defined_once_ = false;
  Eigen::MatrixXcd base_;
  Eigen::MatrixXcd raise_;
  Eigen::MatrixXcd lower_;
  Eigen::RowVectorXcd kplus_row_;
};

Operator to_operator(const State& x, int d) {
  return Eigen::Map<const Operator>(x.data(), d, d);
}

}  // namespace

Trajectory integrate_feedback(const DensityMatrix& rho0,
                              const ModelParams& params,
                              const FeedbackConfig& feedback, double t_end,
                              double output_dt,
                              const IntegratorConfig& integrator,
                              std::size_t checkpoint_every) {
  params.validate();
  feedback.validate();
  if (!(t_end > 0.0) || !(output_dt > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "t_end and output_dt must be positive");
  }
  if (rho0.dim() != params.spin.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "initial state does not match the model spin");
  }

  const SpinOperators ops = spin_operators(params.spin);
  FeedbackSystem system(params, ops, feedback);
  const int d = ops.dim();

  const auto samples =
      static_cast<std::size_t>(std::floor(t_end / output_dt + 1e-9)) + 1;
  std::vector<double> times(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    times[k] = static_cast<double>(k) * output_dt;
  }

  Trajectory traj;
  traj.params = params;
  traj.params.omega = 0.0;
  traj.feedback = feedback;
  traj.times.reserve(samples);
  traj.k_plus.reserve(samples);
  traj.trace_error.reserve(samples);

  State x(rho0.matrix().data(), rho0.matrix().data() + rho0.matrix().size());

  auto observer = [&](const State& state, double t) {
    Complex tr(0.0, 0.0);
    for (int i = 0; i < d; ++i) tr += state[static_cast<std::size_t>(i * d + i)];
    const double trace_err = std::abs(tr - Complex(1.0, 0.0));
    if (trace_err > integrator.trace_tol) {
      throw Error(ErrorKind::kStateInvalid,
                  fmt::format("trace drifted by {:.3e} at t = {}", trace_err, t));
    }
    const std::size_t k = traj.times.size();
    traj.times.push_back(times[k]);
    traj.k_plus.push_back(system.k_plus(state));
    traj.trace_error.push_back(trace_err);
    if (checkpoint_every > 0 && k % checkpoint_every == 0 && k + 1 < samples) {
      traj.checkpoint_times.push_back(times[k]);
      traj.checkpoints.push_back(to_operator(state, d));
    }
  };

  using Stepper = odeint::runge_kutta_dopri5<State>;
  auto stepper = odeint::make_dense_output(integrator.abs_tol,
                                           integrator.rel_tol, Stepper());
  try {
    odeint::integrate_times(
        stepper, std::ref(system), x, times.begin(), times.end(),
        std::min(integrator.initial_step, output_dt), observer,
        odeint::max_step_checker(integrator.max_steps_per_sample));
  } catch (const odeint::odeint_error& e) {
    throw Error(ErrorKind::kStepSizeUnderflow,
                fmt::format("adaptive integrator failed: {}", e.what()));
  }

  Operator final_state = to_operator(x, d);
  const StateDefects defects = state_defects(final_state);
  if (defects.hermiticity > integrator.final_state_tol ||
      defects.trace > integrator.final_state_tol ||
      defects.min_eigenvalue < -integrator.final_state_tol) {
    throw Error(ErrorKind::kStateInvalid,
                fmt::format("final state invalid (hermiticity {:.2e}, trace "
                            "{:.2e}, min eigenvalue {:.2e})",
                            defects.hermiticity, defects.trace,
                            defects.min_eigenvalue));
  }
  traj.checkpoint_times.push_back(traj.times.back());
  traj.checkpoints.push_back(std::move(final_state));
  return traj;
}

Trajectory late_window(const Trajectory& traj, double fraction) {
  if (traj.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "late_window: empty trajectory");
  }
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("late_window: fraction {} not in (0, 1]", fraction));
  }
  const std::size_t n = traj.size();
  const auto keep = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))),
      1, n);
  const std::size_t first = n - keep;

  Trajectory out;
  out.params = traj.params;
  out.feedback = traj.feedback;
  out.times.assign(traj.times.begin() + first, traj.times.end());
  out.k_plus.assign(traj.k_plus.begin() + first, traj.k_plus.end());
  if (traj.trace_error.size() == n) {
    out.trace_error.assign(traj.trace_error.begin() + first,
                           traj.trace_error.end());
  }
  const double t0 = out.times.front();
  for (std::size_t i = 0; i < traj.checkpoints.size(); ++i) {
    if (traj.checkpoint_times[i] >= t0) {
      out.checkpoint_times.push_back(traj.checkpoint_times[i]);
      out.checkpoints.push_back(traj.checkpoints[i]);
    }
  }
  return out;
}

Table trajectory_table(const Trajectory& traj) {
  Table table;
  table.name = "trajectory";
  table.columns = {"t", "re_k_plus", "im_k_plus", "k_perp"};
  table.rows.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    table.rows.push_back({traj.times[i], traj.k_plus[i].real(),
                          traj.k_plus[i].imag(), std::abs(traj.k_plus[i])});
  }
  return table;
}

}  // namespace qgyro
