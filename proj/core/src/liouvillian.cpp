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

#include "qgyro/liouvillian.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "qgyro/error.hpp"

namespace qgyro {

namespace {

void require_square(const Operator& x, int dim, const char* what) {
  if (x.rows() != dim || x.cols() != dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("{}: expected {}x{}, got {}x{}", what, dim, dim,
                            x.rows(), x.cols()));
  }
}

}  // namespace

void ModelParams::validate() const {
  for (double v : {omega, c_q, omega_d, beta, gamma1, gamma2, gamma_p}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidArgument, "model parameter is not finite");
    }
  }
  if (gamma1 < 0.0 || gamma2 < 0.0) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("relaxation rates must be >= 0 (gamma1 = {}, "
                            "gamma2 = {})",
                            gamma1, gamma2));
  }
}

double ModelParams::max_rate() const noexcept {
  return std::max({gamma1, gamma2, std::abs(gamma_p)});
}

EffectiveRates effective_rates(const SpinExchangeParams& se,
                               bool reject_negative_gamma2) {
  for (double v : {se.gamma_bin, se.gamma_s, se.gamma_f, se.gamma1_prime,
                   se.gamma2_prime}) {
    if (v < 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "spin-exchange rates must be non-negative");
    }
  }
  if (se.mean_fz2 < 0.0 || se.mean_f2 < se.mean_fz2) {
    throw Error(ErrorKind::kInvalidArgument,
                "spin-exchange moments require <F^2> >= <F_z^2> >= 0");
  }
  const double gamma_big_s = se.gamma_bin + se.gamma_s;
  EffectiveRates out;
  out.gamma1 = se.gamma1_prime + gamma_big_s +
               2.0 * se.gamma_f * (se.mean_f2 - se.mean_fz2);
  out.gamma2 =
      se.gamma2_prime + 2.0 * se.gamma_f * (2.0 * se.mean_fz2 - se.mean_f2);
  out.gamma_p = gamma_big_s * se.mean_sz + se.gamma_f * se.mean_fz;
  if (reject_negative_gamma2 && out.gamma2 < 0.0) {
    throw Error(ErrorKind::kNegativeRate,
                fmt::format("effective gamma2 = {} is negative", out.gamma2));
  }
  return out;
}

Operator hamiltonian_rotating(const ModelParams& params,
                              const SpinOperators& ops) {
  const Complex i_unit(0.0, 1.0);
  const Complex e_minus = std::polar(1.0, -params.beta);
  Operator h = params.omega * ops.kz + params.c_q * ops.kz * ops.kz;
  h += (params.omega_d / (4.0 * i_unit)) *
       (ops.kplus * e_minus - ops.kminus * std::conj(e_minus));
  return h;
}

Operator dissipator_apply(const Operator& rho, const ModelParams& params,
                          const SpinOperators& ops) {
  require_square(rho, ops.dim(), "dissipator_apply");
  const Operator& kz = ops.kz;
  const Operator& kp = ops.kplus;
  const Operator& km = ops.kminus;
  const Operator kz_rho_kz = kz * rho * kz;

  // K.rho.K = K_z rho K_z + (K_+ rho K_- + K_- rho K_+)/2; K^2 = K(K+1) I.
  Operator out = params.gamma1 * (kz_rho_kz + 0.5 * (kp * rho * km + km * rho * kp) -
                                  ops.spin.casimir() * rho);
  const Operator kz2 = kz * kz;
  out += params.gamma2 * (2.0 * kz_rho_kz - (rho * kz2 + kz2 * rho));
  out += params.gamma_p * (kp * rho * km - km * rho * kp + rho * kz + kz * rho);
  return out;
}

Operator dissipator_apply(const DensityMatrix& rho, const ModelParams& params,
                          const SpinOperators& ops) {
  return dissipator_apply(rho.matrix(), params, ops);
}

Operator rhs_apply(const Operator& rho, const ModelParams& params,
                   const SpinOperators& ops) {
  const Operator h = hamiltonian_rotating(params, ops);
  const Complex i_unit(0.0, 1.0);
  return -i_unit * (h * rho - rho * h) + dissipator_apply(rho, params, ops);
}

Eigen::VectorXcd vectorize(const Operator& x) {
  // Eigen storage is column-major, so the raw buffer is already stacked.
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

Operator unvectorize(const Eigen::VectorXcd& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("unvectorize: {} entries for d = {}", v.size(), dim));
  }
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Eigen::MatrixXcd sandwich_superop(const Operator& left, const Operator& right) {
  return Eigen::kroneckerProduct(right.transpose(), left).eval();
}

Eigen::MatrixXcd commutator_superop(const Operator& h) {
  const auto d = h.rows();
  const Operator id = Operator::Identity(d, d);
  const Complex i_unit(0.0, 1.0);
  return -i_unit * (sandwich_superop(h, id) - sandwich_superop(id, h));
}

Superoperator::Superoperator(Eigen::MatrixXcd matrix, int dim)
    : matrix_(std::move(matrix)), dim_(dim) {
  const auto n = static_cast<Eigen::Index>(dim) * dim;
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("superoperator must be {}x{}", n, n));
  }
}

Operator Superoperator::apply(const Operator& x) const {
  require_square(x, dim_, "Superoperator::apply");
  return unvectorize(matrix_ * vectorize(x), dim_);
}

Superoperator dissipator_matrix(const ModelParams& params,
                                const SpinOperators& ops) {
  const int d = ops.dim();
  const Operator id = Operator::Identity(d, d);
  const Operator kz2 = ops.kz * ops.kz;
  const Eigen::MatrixXcd zz = sandwich_superop(ops.kz, ops.kz);
  const Eigen::MatrixXcd pm = sandwich_superop(ops.kplus, ops.kminus);
  const Eigen::MatrixXcd mp = sandwich_superop(ops.kminus, ops.kplus);
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(d * d, d * d);

  Eigen::MatrixXcd m =
      params.gamma1 * (zz + 0.5 * (pm + mp) - ops.spin.casimir() * id2);
  m += params.gamma2 *
       (2.0 * zz - sandwich_superop(id, kz2) - sandwich_superop(kz2, id));
  m += params.gamma_p *
       (pm - mp + sandwich_superop(id, ops.kz) + sandwich_superop(ops.kz, id));
  return Superoperator(std::move(m), d);
}

Superoperator liouvillian_matrix(const ModelParams& params,
                                 const SpinOperators& ops) {
  params.validate();
  if (!(ops.spin == params.spin)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "spin operators do not match the model spin");
  }
  Eigen::MatrixXcd m = commutator_superop(hamiltonian_rotating(params, ops));
  m += dissipator_matrix(params, ops).matrix();
  return Superoperator(std::move(m), ops.dim());
}

Superoperator liouvillian_matrix(const ModelParams& params) {
  return liouvillian_matrix(params, spin_operators(params.spin));
}

}  // namespace qgyro
