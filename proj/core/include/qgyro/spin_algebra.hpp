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

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace qgyro {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;

/// Spin quantum number K stored as the integer 2K so half-integers are exact.
class SpinQuantumNumber {
 public:
  /// Throws Error(kInvalidArgument) unless two_k >= 1.
  explicit SpinQuantumNumber(int two_k);

  static SpinQuantumNumber spin_half() { return SpinQuantumNumber(1); }
  static SpinQuantumNumber spin_three_halves() { return SpinQuantumNumber(3); }

  int two_k() const noexcept { return two_k_; }
  double value() const noexcept { return 0.5 * two_k_; }
  int dim() const noexcept { return two_k_ + 1; }
  /// K(K+1), the eigenvalue of K^2.
  double casimir() const noexcept { return value() * (value() + 1.0); }
  /// Magnetic quantum number of basis index i; index 0 is m = K.
  double m_of_index(int i) const noexcept { return value() - i; }
  /// Basis index of m. Throws if m is not one of K, K-1, ..., -K.
  int index_of_m(double m) const;

  friend bool operator==(SpinQuantumNumber, SpinQuantumNumber) = default;

 private:
  int two_k_;
};

/// Angular-momentum matrices in the K_z eigenbasis ordered m = K, K-1, ..., -K.
struct SpinOperators {
  SpinQuantumNumber spin;
  Operator kx;
  Operator ky;
  Operator kz;
  Operator kplus;
  Operator kminus;
  Operator k2;

  int dim() const noexcept { return spin.dim(); }
};

SpinOperators spin_operators(SpinQuantumNumber spin);

/// Tolerances used to accept a matrix as a density matrix.
struct DensityTolerance {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

/// Hermitian, unit-trace, positive-semidefinite state. Construction validates.
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator rho, const DensityTolerance& tol = {});

  static DensityMatrix basis_state(SpinQuantumNumber spin, double m);
  static DensityMatrix maximally_mixed(SpinQuantumNumber spin);

  const Operator& matrix() const noexcept { return rho_; }
  int dim() const noexcept { return static_cast<int>(rho_.rows()); }

 private:
  Operator rho_;
};

/// Hermiticity defect, trace defect and smallest eigenvalue of a matrix.
struct StateDefects {
  double hermiticity;
  double trace;
  double min_eigenvalue;
};
StateDefects state_defects(const Operator& rho);

/// Tr(op * rho). Throws Error(kDimensionMismatch) on size mismatch.
Complex expectation(const Operator& op, const DensityMatrix& rho);
Complex expectation(const Operator& op, const Operator& rho);

inline constexpr double kPhaseEpsilon = 1e-9;

/// <K_+> written as k_perp * exp(-i phi).
struct TransversePhase {
  double k_perp = 0.0;
  std::optional<double> phi;  // empty when k_perp < epsilon

  bool defined() const noexcept { return phi.has_value(); }
};

TransversePhase transverse_phase(const Operator& rho, const SpinOperators& ops,
                                 double epsilon = kPhaseEpsilon);
TransversePhase transverse_phase(const DensityMatrix& rho,
                                 const SpinOperators& ops,
                                 double epsilon = kPhaseEpsilon);

/// Reduces an angle to (-pi, pi].
double wrap_phase(double angle) noexcept;

/// Max-norm of a matrix: largest absolute element.
double max_abs(const Operator& m) noexcept;

}  // namespace qgyro
