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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "langevin/observable.hpp"
#include "langevin/potential.hpp"
#include "langevin/rng.hpp"
#include "langevin/scheme.hpp"
#include "langevin/state.hpp"

namespace langevin {

enum class InitKind { fixed, gaussian_cloud };

// Starting point of every chain. The Gaussian cloud perturbs the centre's
// positions by sigma * N(0, 1) using the chain's own stream, redrawing
// (deterministically) until the position lies in D.
struct Initializer {
    InitKind kind = InitKind::fixed;
    State center;
    double sigma = 0.1;

    State draw(NormalStream& stream, const Potential& potential) const;
};

struct RunSpec {
    std::size_t n_chains = 1;
    std::size_t n_steps = 0;
    std::size_t burn_in = 0;
    std::uint64_t master_seed = 0;
    Initializer init;
    std::size_t record_stride = 1;
    SchemeKind scheme = SchemeKind::stopped;
    unsigned threads = 1;
    std::uint32_t level = 0;  // substream tag; analysis uses one per grid point

    void validate() const;
};

struct ObservableSummary {
    std::string name;
    double mean = 0.0;
    double variance = 0.0;
    double ci95 = 0.0;
    double n_effective = 0.0;
};

struct EnsembleResult {
    std::vector<ObservableSummary> observables;
    std::size_t n_chains = 0;
    std::size_t escape_count = 0;
    double rejection_rate = 0.0;
    std::vector<std::string> warnings;
};

struct SampleRow {
    std::size_t chain;
    std::size_t step;
    double hamiltonian;
    std::vector<double> values;
};

// Recorded trajectory samples at multiples of record_stride, ordered by
// (chain, step).
struct SampleLog {
    std::vector<SampleRow> rows;
};

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Evolves n_chains independent chains and summarises each observable at the
/// final states. Escaped chains (unstopped scheme) are excluded from the
/// summaries; if every chain escapes, throws EscapedEnsemble.
EnsembleResult run_ensemble(const RunSpec& spec, const Potential& potential,
                            const SchemeParams& params, const std::vector<Observable>& observables,
                            SampleLog* log = nullptr);

struct TimeAverage {
    double mean;
    double ci_halfwidth;
    double n_effective;
    double rejection_rate;
};

/// Time average of f over steps burn_in+1 .. n_steps of a single chain, with
/// a batch-means confidence interval.
TimeAverage ergodic_average(const RunSpec& spec, const Potential& potential,
                            const SchemeParams& params, const Observable& observable);

/// Average of independent single-chain time averages (chain i uses stream i).
/// CI combines the per-chain batch-means half-widths in quadrature.
TimeAverage ergodic_average_ensemble(const RunSpec& spec, const Potential& potential,
                                     const SchemeParams& params, const Observable& observable);

struct MomentPoint {
    std::size_t step;
    double mean;
    double ci95;
};

/// Checkpoint steps 0, 1, 2, 4, ... (powers of two) plus n_steps.
std::vector<std::size_t> log_checkpoints(std::size_t n_steps);

/// Cross-chain E[exp(b H(Z_n))] at log-spaced checkpoints. Needs 0 < b < beta.
std::vector<MomentPoint> exp_moment(const RunSpec& spec, const Potential& potential,
                                    const SchemeParams& params, double b);

struct TailEstimate {
    double probability;
    double ci95;
};

/// Fraction of chains with H(Z_n) >= a at the final step (escaped chains
/// count as exceedances), with a normal-approximation binomial interval.
TailEstimate tail_probability(const RunSpec& spec, const Potential& potential,
                              const SchemeParams& params, double a);

}  // namespace langevin
