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

#include <Eigen/Dense>

#include "qgyro/spin_algebra.hpp"

namespace qgyro {

/// Scalars of the rotating-frame model. Every frequency and rate shares one
/// unit; nothing in the library multiplies by 2*pi.
struct ModelParams {
  double omega = 0.0;    // frequency deviation of the rotating frame
  double c_q = 0.0;      // quadrupole constant (signed)
  double omega_d = 0.0;  // feedback drive amplitude (signed)
  double beta = 0.0;     // feedback phase delay, radians
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma_p = 0.0;  // pumping rate (signed)
  SpinQuantumNumber spin = SpinQuantumNumber::spin_three_halves();

  /// Throws Error(kInvalidArgument) on negative relaxation rates or
  /// non-finite values.
  void validate() const;
  /// Largest of gamma1, gamma2, |gamma_p|.
  double max_rate() const noexcept;
};

/// Spin-exchange inputs collapsed into the effective rates of the dissipator.
struct SpinExchangeParams {
  double gamma_bin = 0.0;
  double gamma_s = 0.0;
  double gamma_f = 0.0;
  double mean_sz = 0.0;
  double mean_fz = 0.0;
  double mean_f2 = 0.0;
  double mean_fz2 = 0.0;
  double gamma1_prime = 0.0;
  double gamma2_prime = 0.0;
};

struct EffectiveRates {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma_p = 0.0;
};

/// gamma1 = G1' + G_S + 2 G_f <F^2 - F_z^2>
/// gamma2 = G2' + 2 G_f <2 F_z^2 - F^2>
/// gamma_p = G_S <S_z> + G_f <F_z>,   with G_S = G_bin + G_s.
///
/// gamma2 goes negative when <2F_z^2> < <F^2>; with `reject_negative_gamma2`
/// that raises Error(kNegativeRate) instead of returning the value.
EffectiveRates effective_rates(const SpinExchangeParams& se,
                               bool reject_negative_gamma2 = true);

/// H = omega K_z + C_Q K_z^2 + (Omega_d / 4i)(K_+ e^{-i beta} - K_- e^{i beta})
Operator hamiltonian_rotating(const ModelParams& params,
                              const SpinOperators& ops);

/// Dissipator applied to an arbitrary matrix (need not be a valid state).
Operator dissipator_apply(const Operator& rho, const ModelParams& params,
                          const SpinOperators& ops);
Operator dissipator_apply(const DensityMatrix& rho, const ModelParams& params,
                          const SpinOperators& ops);

/// Full right-hand side -i[H, rho] + L_D[rho].
Operator rhs_apply(const Operator& rho, const ModelParams& params,
                   const SpinOperators& ops);

/// Column-stacking vectorization: element (i, j) goes to index i + j*d.
/// Under this convention X -> A X B has matrix kron(B^T, A).
Eigen::VectorXcd vectorize(const Operator& x);
Operator unvectorize(const Eigen::VectorXcd& v, int dim);

/// Matrix of X -> A X B.
Eigen::MatrixXcd sandwich_superop(const Operator& left, const Operator& right);

/// Time-independent generator acting on column-stacked matrices.
class Superoperator {
 public:
  Superoperator(Eigen::MatrixXcd matrix, int dim);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  /// Hilbert-space dimension d (the matrix is d^2 x d^2).
  int dim() const noexcept { return dim_; }
  Operator apply(const Operator& x) const;

 private:
  Eigen::MatrixXcd matrix_;
  int dim_;
};

Superoperator liouvillian_matrix(const ModelParams& params);
Superoperator liouvillian_matrix(const ModelParams& params,
                                 const SpinOperators& ops);

/// Dissipator alone as a superoperator.
Superoperator dissipator_matrix(const ModelParams& params,
                                const SpinOperators& ops);

/// Superoperator of X -> -i[h, X].
Eigen::MatrixXcd commutator_superop(const Operator& h);

}  // namespace qgyro
