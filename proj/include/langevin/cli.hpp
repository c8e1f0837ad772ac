/*
   Copyright 2026 The langevin-stopped authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "langevin/config.hpp"
#include "langevin/potential.hpp"
#include "langevin/sampler.hpp"
#include "langevin/scheme.hpp"

namespace langevin {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitEscaped = 3,
    kExitNumerical = 4,
};

struct CliOptions {
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

Potential potential_from(const ExperimentConfig& cfg);
SchemeParams scheme_from(const ExperimentConfig& cfg);
RunSpec run_spec_from(const ExperimentConfig& cfg, const Potential& potential,
                      const CliOptions& opts);
LyapunovParams lyapunov_from(const ExperimentConfig& cfg, const Potential& potential,
                             const SchemeParams& params);

/// Probe states with H spread evenly over [low, high] * delta^-l. Positions
/// come from a Gaussian cloud around `center`; the remaining energy goes into
/// a velocity of random direction. Deterministic in `seed`.
std::vector<State> high_energy_probes(const Potential& potential, const SchemeParams& params,
                                      const State& center, double sigma, std::size_t n,
                                      double low, double high, std::uint64_t seed);

// Subcommands. Each returns an exit code and never throws; diagnostics go to `err`.
int cmd_simulate(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_weak_error(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_invariant_bias(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check_potential(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_lyapunov_probe(const CliOptions& opts, std::ostream& out, std::ostream& err);

/// Entry point of the `langevin` executable.
int run_cli(int argc, char** argv);

}  // namespace langevin
