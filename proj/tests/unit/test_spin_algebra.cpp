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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgyro/error.hpp"
#include "qgyro/spin_algebra.hpp"

namespace qgyro {
namespace {

class SpinOperatorsTest : public ::testing::TestWithParam<int> {};

TEST_P(SpinOperatorsTest, CommutationRelations) {
  const SpinOperators ops = spin_operators(SpinQuantumNumber(GetParam()));
  const Complex i(0.0, 1.0);
  EXPECT_LT(max_abs(ops.kx * ops.ky - ops.ky * ops.kx - i * ops.kz), 1e-12);
  EXPECT_LT(max_abs(ops.ky * ops.kz - ops.kz * ops.ky - i * ops.kx), 1e-12);
  EXPECT_LT(max_abs(ops.kz * ops.kx - ops.kx * ops.kz - i * ops.ky), 1e-12);
}

TEST_P(SpinOperatorsTest, CasimirIsScalar) {
  const SpinQuantumNumber spin(GetParam());
  const SpinOperators ops = spin_operators(spin);
  const Operator k2 = ops.kx * ops.kx + ops.ky * ops.ky + ops.kz * ops.kz;
  const Operator expected =
      spin.casimir() * Operator::Identity(spin.dim(), spin.dim());
  EXPECT_LT(max_abs(k2 - expected), 1e-12);
  EXPECT_LT(max_abs(ops.k2 - expected), 1e-12);
}

TEST_P(SpinOperatorsTest, MatchesCartesianReference) {
  const SpinOperators ops = spin_operators(SpinQuantumNumber(GetParam()));
  const oracle::CartesianSpin ref = oracle::cartesian_spin(GetParam());
  EXPECT_LT(max_abs(ops.kx - ref.x), 1e-14);
  EXPECT_LT(max_abs(ops.ky - ref.y), 1e-14);
  EXPECT_LT(max_abs(ops.kz - ref.z), 1e-14);
  EXPECT_LT(max_abs(ops.kplus - (ref.x + Complex(0, 1) * ref.y)), 1e-14);
  EXPECT_EQ(max_abs(ops.kminus - ops.kplus.adjoint()), 0.0);
}

INSTANTIATE_TEST_SUITE_P(Spins, SpinOperatorsTest,
                         ::testing::Values(1, 2, 3, 4, 5, 7));

TEST(SpinQuantumNumber, IndexMapping) {
  const SpinQuantumNumber s = SpinQuantumNumber::spin_three_halves();
  EXPECT_EQ(s.dim(), 4);
  EXPECT_DOUBLE_EQ(s.m_of_index(0), 1.5);
  EXPECT_DOUBLE_EQ(s.m_of_index(3), -1.5);
  EXPECT_EQ(s.index_of_m(-0.5), 2);
  EXPECT_THROW(s.index_of_m(0.0), Error);
  EXPECT_THROW(s.index_of_m(2.5), Error);
  EXPECT_THROW(SpinQuantumNumber(0), Error);
}

TEST(SpinOperators, SpinHalfIsHalfPauli) {
  const SpinOperators ops = spin_operators(SpinQuantumNumber::spin_half());
  Operator sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  EXPECT_LT(max_abs(ops.kx - 0.5 * sx), 1e-15);
  EXPECT_LT(max_abs(ops.ky - 0.5 * sy), 1e-15);
  EXPECT_LT(max_abs(ops.kz - 0.5 * sz), 1e-15);
}

TEST(DensityMatrix, BasisAndMixedStates) {
  const SpinQuantumNumber s = SpinQuantumNumber::spin_three_halves();
  const DensityMatrix up = DensityMatrix::basis_state(s, 1.5);
  EXPECT_DOUBLE_EQ(up.matrix()(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(up.matrix().trace().real(), 1.0);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(s);
  EXPECT_LT(max_abs(mixed.matrix() - 0.25 * Operator::Identity(4, 4)), 1e-16);
  EXPECT_THROW(DensityMatrix::basis_state(s, 1.0), Error);
}

TEST(DensityMatrix, RejectsInvalidMatrices) {
  Operator bad_trace = Operator::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{bad_trace}, Error);

  Operator non_hermitian = 0.5 * Operator::Identity(2, 2);
  non_hermitian(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{non_hermitian}, Error);

  Operator negative(2, 2);
  negative << 1.2, 0, 0, -0.2;
  try {
    DensityMatrix rho(negative);
    FAIL() << "negative eigenvalue accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStateInvalid);
  }
}

TEST(Expectation, DimensionMismatchThrows) {
  const SpinOperators ops = spin_operators(SpinQuantumNumber::spin_half());
  const DensityMatrix rho =
      DensityMatrix::maximally_mixed(SpinQuantumNumber::spin_three_halves());
  try {
    expectation(ops.kz, rho);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
  }
}

TEST(Expectation, PolarizedStateMoments) {
  const SpinQuantumNumber s = SpinQuantumNumber::spin_three_halves();
  const SpinOperators ops = spin_operators(s);
  const DensityMatrix up = DensityMatrix::basis_state(s, 1.5);
  EXPECT_NEAR(expectation(ops.kz, up).real(), 1.5, 1e-15);
  EXPECT_NEAR(std::abs(expectation(ops.kplus, up)), 0.0, 1e-15);
}

TEST(TransversePhase, UndefinedBelowEpsilon) {
  const SpinQuantumNumber s = SpinQuantumNumber::spin_three_halves();
  const SpinOperators ops = spin_operators(s);
  const auto tp = transverse_phase(DensityMatrix::basis_state(s, 1.5), ops);
  EXPECT_FALSE(tp.defined());
  EXPECT_EQ(tp.k_perp, 0.0);
}

TEST(TransversePhase, RecoversPhaseOfRotatedState) {
  // <K_+> = K_perp exp(-i phi); an x-polarized spin-1/2 state has phi = 0,
  // and rotating it about z by theta gives phi = -theta.
  const SpinQuantumNumber s = SpinQuantumNumber::spin_half();
  const SpinOperators ops = spin_operators(s);
  const double theta = 0.7;
  Operator rho(2, 2);
  rho << 0.5, 0.5 * std::polar(1.0, -theta), 0.5 * std::polar(1.0, theta), 0.5;
  const auto tp = transverse_phase(rho, ops);
  ASSERT_TRUE(tp.defined());
  EXPECT_NEAR(tp.k_perp, 0.5, 1e-15);
  EXPECT_NEAR(*tp.phi, -theta, 1e-14);
}

TEST(WrapPhase, MapsIntoHalfOpenInterval) {
  const double pi = std::numbers::pi;
  EXPECT_DOUBLE_EQ(wrap_phase(pi), pi);
  EXPECT_NEAR(wrap_phase(-pi), pi, 1e-15);
  EXPECT_NEAR(wrap_phase(3.0 * pi / 2.0), -pi / 2.0, 1e-15);
  EXPECT_NEAR(wrap_phase(0.25), 0.25, 0.0);
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = wrap_phase(a);
    EXPECT_GT(w, -pi);
    EXPECT_LE(w, pi);
    EXPECT_NEAR(std::remainder(a - w, 2.0 * pi), 0.0, 1e-12);
  }
}

}  // namespace
}  // namespace qgyro
