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

#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "qgyro/dynamics.hpp"
#include "qgyro/liouvillian.hpp"
#include "qgyro/properties.hpp"
#include "qgyro/spectral.hpp"
#include "qgyro/steady_state.hpp"

namespace {

using namespace qgyro;

ModelParams params() {
  ModelParams p;
  p.gamma1 = 0.05;
  p.gamma2 = 0.05;
  p.gamma_p = 0.0125;
  p.omega_d = 0.05;
  p.c_q = 0.02;
  return p;
}

void BM_LiouvillianMatrix(benchmark::State& state) {
  ModelParams p = params();
  p.spin = SpinQuantumNumber(static_cast<int>(state.range(0)));
  const SpinOperators ops = spin_operators(p.spin);
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian_matrix(p, ops));
}
BENCHMARK(BM_LiouvillianMatrix)->Arg(1)->Arg(3)->Arg(5)->Arg(9);

void BM_SteadyState(benchmark::State& state) {
  ModelParams p = params();
  p.spin = SpinQuantumNumber(static_cast<int>(state.range(0)));
  const SpinOperators ops = spin_operators(p.spin);
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(p, ops));
}
BENCHMARK(BM_SteadyState)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_SolveShift(benchmark::State& state) {
  const ModelParams p = params();
  for (auto _ : state) benchmark::DoNotOptimize(solve_shift(p));
}
BENCHMARK(BM_SolveShift)->Unit(benchmark::kMillisecond);

void BM_IntegrateFeedback(benchmark::State& state) {
  const ModelParams p = params();
  const DensityMatrix rho0 =
      DensityMatrix::basis_state(SpinQuantumNumber::spin_three_halves(), 1.5);
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_feedback(rho0, p, {}, t_end, 0.05));
  }
}
BENCHMARK(BM_IntegrateFeedback)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Complex> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::polar(1.0, 0.3 * 0.05 * static_cast<double>(i));
  }
  for (auto _ : state) {
    const Spectrum s = spectrum(x, 0.05);
    benchmark::DoNotOptimize(find_peaks(s));
  }
}
BENCHMARK(BM_Spectrum)->Arg(1000)->Arg(4000)->Arg(8000)->Unit(benchmark::kMicrosecond);

void BM_PropertySuite(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_property_suite(0, count));
}
BENCHMARK(BM_PropertySuite)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
