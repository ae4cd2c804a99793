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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qgyro/config.hpp"
#include "qgyro/error.hpp"
#include "qgyro/harness.hpp"
#include "qgyro/parallel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

int run(const std::string& command, const Options& opts) {
  const qgyro::ExperimentConfig cfg = qgyro::load_config(opts.config);
  const unsigned threads = qgyro::resolve_thread_count(opts.threads);
  qgyro::ResultBundle bundle;
  if (command == "kcurves") {
    bundle = qgyro::run_kcurves(cfg, threads);
  } else if (command == "shift-sweep") {
    bundle = qgyro::run_shift_sweeps(cfg, threads);
  } else if (command == "dynamics") {
    bundle = qgyro::run_dynamics_spectrum(cfg, threads);
  } else if (command == "properties") {
    bundle = qgyro::run_properties(cfg, opts.seed);
  } else {
    bundle = qgyro::run_all(cfg, threads, opts.seed);
  }
  const std::string dir = opts.out.empty() ? cfg.output_dir : opts.out;
  qgyro::write_bundle(bundle, dir);
  std::cout << fmt::format("{}: wrote {} tables to {}\n", command,
                           bundle.tables.size(), dir);
  if (bundle.solver_failures > 0) {
    std::cerr << fmt::format("{} sweep point(s) failed to solve\n",
                             bundle.solver_failures);
    return kExitSolver;
  }
  if (bundle.property_violations > 0) {
    std::cerr << fmt::format("{} property violation(s)\n",
                             bundle.property_violations);
    return kExitChecksFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrupole shift and feedback dynamics of a spin-K gyroscope"};
  app.set_version_flag("--version", std::string(qgyro::version()));
  app.require_subcommand(1);

  Options opts;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "Experiment configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out,
                    "Output directory (default: [output] dir)");
    sub->add_option("--seed", seed, "Seed for the property suite");
    sub->add_option("--threads", opts.threads,
                    "Worker threads (default: QGYRO_THREADS, else all cores)")
        ->check(CLI::PositiveNumber);
  };
  const char* commands[][2] = {
      {"kcurves", "k_x and k_y against omega for each C_Q"},
      {"shift-sweep", "Self-consistent shift along C_Q, Omega_d or beta"},
      {"dynamics", "Feedback time evolution, spectrum and peaks"},
      {"properties", "Randomized symmetry and invariant checks"},
      {"all", "Every experiment present in the configuration"},
  };
  for (const auto& c : commands) add_common(app.add_subcommand(c[0], c[1]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed") > 0) opts.seed = seed;
  try {
    return run(sub->get_name(), opts);
  } catch (const qgyro::Error& e) {
    std::cerr << "error (" << qgyro::to_string(e.kind()) << "): " << e.what()
              << '\n';
    return e.is_solver_failure() ? kExitSolver : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
