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

#include "qgyro/spin_algebra.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qgyro/error.hpp"

namespace qgyro {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kNegativeRate: return "NegativeRate";
    case ErrorKind::kNullSpaceDegenerate: return "NullSpaceDegenerate";
    case ErrorKind::kNotPositive: return "NotPositive";
    case ErrorKind::kNoBracket: return "NoBracket";
    case ErrorKind::kSolutionRejected: return "SolutionRejected";
    case ErrorKind::kStepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::kStateInvalid: return "StateInvalid";
    case ErrorKind::kSeriesTooShort: return "SeriesTooShort";
  }
  return "Unknown";
}

SpinQuantumNumber::SpinQuantumNumber(int two_k) : two_k_(two_k) {
  if (two_k < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("spin requires 2K >= 1, got {}", two_k));
  }
}

int SpinQuantumNumber::index_of_m(double m) const {
  const double idx = value() - m;
  const double rounded = std::round(idx);
  if (std::abs(idx - rounded) > 1e-9 || rounded < 0 || rounded >= dim()) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("m = {} is not a valid projection for K = {}", m,
                            value()));
  }
  return static_cast<int>(rounded);
}

SpinOperators spin_operators(SpinQuantumNumber spin) {
  const int d = spin.dim();
  const double k = spin.value();

  Operator kz = Operator::Zero(d, d);
  Operator kplus = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = spin.m_of_index(i);
    kz(i, i) = m;
    // <m+1| K_+ |m>: column i (m) to row i-1 (m+1).
    if (i > 0) kplus(i - 1, i) = std::sqrt(k * (k + 1.0) - m * (m + 1.0));
  }
  Operator kminus = kplus.adjoint();
  const Complex i_unit(0.0, 1.0);
  Operator kx = 0.5 * (kplus + kminus);
  Operator ky = (kplus - kminus) / (2.0 * i_unit);
  Operator k2 = kx * kx + ky * ky + kz * kz;

  return SpinOperators{spin,
                       std::move(kx),
                       std::move(ky),
                       std::move(kz),
                       std::move(kplus),
                       std::move(kminus),
                       std::move(k2)};
}

double max_abs(const Operator& m) noexcept {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

StateDefects state_defects(const Operator& rho) {
  StateDefects out{};
  out.hermiticity = max_abs(rho - rho.adjoint());
  out.trace = std::abs(rho.trace() - Complex(1.0, 0.0));
  Operator herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  return out;
}

DensityMatrix::DensityMatrix(Operator rho, const DensityTolerance& tol)
    : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("density matrix must be square with d >= 2, got "
                            "{}x{}",
                            rho_.rows(), rho_.cols()));
  }
  const StateDefects defects = state_defects(rho_);
  if (defects.hermiticity > tol.hermiticity) {
    throw Error(ErrorKind::kStateInvalid,
                fmt::format("density matrix not Hermitian (defect {:.3e})",
                            defects.hermiticity));
  }
  if (defects.trace > tol.trace) {
    throw Error(ErrorKind::kStateInvalid,
                fmt::format("density matrix trace differs from 1 by {:.3e}",
                            defects.trace));
  }
  if (defects.min_eigenvalue < tol.min_eigenvalue) {
    throw Error(ErrorKind::kStateInvalid,
                fmt::format("density matrix has eigenvalue {:.3e}",
                            defects.min_eigenvalue));
  }
}

DensityMatrix DensityMatrix::basis_state(SpinQuantumNumber spin, double m) {
  const int i = spin.index_of_m(m);
  Operator rho = Operator::Zero(spin.dim(), spin.dim());
  rho(i, i) = 1.0;
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(SpinQuantumNumber spin) {
  const int d = spin.dim();
  return DensityMatrix(Operator::Identity(d, d) / static_cast<double>(d));
}

Complex expectation(const Operator& op, const Operator& rho) {
  if (op.rows() != rho.rows() || op.cols() != rho.cols() ||
      op.rows() != op.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("expectation: operator {}x{} vs state {}x{}",
                            op.rows(), op.cols(), rho.rows(), rho.cols()));
  }
  // Tr(A B) = sum_ij A_ij B_ji
  return (op.array() * rho.transpose().array()).sum();
}

Complex expectation(const Operator& op, const DensityMatrix& rho) {
  return expectation(op, rho.matrix());
}

double wrap_phase(double angle) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

TransversePhase transverse_phase(const Operator& rho, const SpinOperators& ops,
                                 double epsilon) {
  const Complex kp = expectation(ops.kplus, rho);
  TransversePhase out;
  out.k_perp = std::abs(kp);
  if (out.k_perp >= epsilon) out.phi = wrap_phase(-std::arg(kp));
  return out;
}

TransversePhase transverse_phase(const DensityMatrix& rho,
                                 const SpinOperators& ops, double epsilon) {
  return transverse_phase(rho.matrix(), ops, epsilon);
}

}  // namespace qgyro
