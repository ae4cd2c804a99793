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

#include <cstddef>
#include <vector>

#include "qgyro/liouvillian.hpp"
#include "qgyro/spin_algebra.hpp"
#include "qgyro/table.hpp"

namespace qgyro {

/// How the drive phase follows <K_+>.
struct FeedbackConfig {
  /// Below this |<K_+>| the phase is treated as undefined.
  double eps_phase = kPhaseEpsilon;
  /// Keep the last defined phase while undefined (else fall back to
  /// initial_phi).
  bool phase_hold = true;
  /// Drive phase used before the phase is first defined.
  double initial_phi = 0.0;

  void validate() const;
};

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  /// Step budget between consecutive output samples.
  int max_steps_per_sample = 100000;
  /// |Tr(rho) - 1| allowed at every sample.
  double trace_tol = 1e-9;
  /// Positivity and Hermiticity allowance on the final state.
  double final_state_tol = 1e-8;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Complex> k_plus;  // k_+'(t) = Tr(K_+ rho(t))
  std::vector<double> trace_error;
  std::vector<double> checkpoint_times;
  std::vector<Operator> checkpoints;
  ModelParams params;
  FeedbackConfig feedback;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  double k_perp(std::size_t i) const { return std::abs(k_plus.at(i)); }
  /// Sample spacing (assumes a uniform grid).
  double dt() const;
};

/// Integrates d rho/dt = -i[C_Q K_z^2 + drive(phi'), rho] + L_D[rho] in the
/// frame rotating at the ideal carrier; params.omega is ignored. The drive
/// phase phi' = -arg Tr(K_+ rho) is re-read at every right-hand-side
/// evaluation. Samples land on t = k * output_dt for k = 0..floor(t_end /
/// output_dt). The final state is always stored as a checkpoint; set
/// `checkpoint_every` > 0 to store every n-th sample as well.
///
/// Throws Error(kStepSizeUnderflow) when the adaptive stepper stalls and
/// Error(kStateInvalid) when trace or positivity drift past tolerance.
Trajectory integrate_feedback(const DensityMatrix& rho0,
                              const ModelParams& params,
                              const FeedbackConfig& feedback, double t_end,
                              double output_dt,
                              const IntegratorConfig& integrator = {},
                              std::size_t checkpoint_every = 0);

/// Trailing `fraction` of the samples (rounded, at least one).
Trajectory late_window(const Trajectory& traj, double fraction = 0.5);

/// Columns t, re_k_plus, im_k_plus, k_perp.
Table trajectory_table(const Trajectory& traj);

}  // namespace qgyro
