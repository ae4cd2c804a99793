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

// Reference implementations used only by the tests. They deliberately take
// different routes from the library: Cartesian spin matrices instead of
// ladder operators, superoperators assembled column by column instead of
// from Kronecker products, eigen-decomposition instead of SVD, and a plain
// O(N M) Fourier sum instead of an FFT.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qgyro/liouvillian.hpp"

namespace qgyro::oracle {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

struct CartesianSpin {
  Mat x, y, z;
  int dim = 0;
  double k = 0.0;
};

/// J_x, J_y, J_z for spin k = two_k / 2, basis ordered m = k, ..., -k.
CartesianSpin cartesian_spin(int two_k);

/// -i[H, rho] + D[rho] built from Cartesian matrices only.
Mat rhs(const Mat& rho, const ModelParams& p);

/// d^2 x d^2 generator assembled by applying rhs() to matrix units.
Mat generator(const ModelParams& p);

/// Trace-one Hermitian steady state from the eigenvector of the eigenvalue
/// with the smallest modulus.
Mat steady_state(const ModelParams& p);

struct Moments {
  double k_x = 0.0;
  double k_y = 0.0;
};
Moments moments(const ModelParams& p);

/// Roots of omega -> k_y on a dense grid, each refined by plain bisection.
struct Root {
  double omega = 0.0;
  double k_x = 0.0;
};
std::vector<Root> shift_roots(const ModelParams& p, double lo, double hi,
                              int points);

/// |sum_n w_n x_n exp(-i nu t_n)| / sum_n w_n at each requested nu.
std::vector<double> dft_amplitudes(const std::vector<Cx>& x, double dt,
                                   const std::vector<double>& w,
                                   const std::vector<double>& nus);

}  // namespace qgyro::oracle
