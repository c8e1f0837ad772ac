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

#include "langevin/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "langevin/stats.hpp"

namespace langevin {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct ChainRun {
    bool escaped = false;
    std::size_t escape_step = 0;
    std::uint64_t rejected = 0;
    std::uint64_t steps = 0;
};

// Steps `z` forward; on_step(k, z) runs after every completed step k >= 1.
template <class OnStep>
ChainRun evolve(State& z, NormalStream& stream, Integrator& integrator, std::size_t n_steps,
                OnStep&& on_step) {
    ChainRun run;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const StepStatus status = integrator.advance(z, stream);
        if (status == StepStatus::escaped) {
            run.escaped = true;
            run.escape_step = k;
            break;
        }
        if (status == StepStatus::rejected) ++run.rejected;
        ++run.steps;
        on_step(k, z);
    }
    return run;
}

void check_init(const RunSpec& spec, const Potential& potential, const SchemeParams& params,
                std::vector<std::string>* warnings) {
    const State& c = spec.init.center;
    if (c.dim() != potential.dim())
        throw InvalidInput("initial state dimension does not match the potential");
    if (!std::isfinite(potential.energy(c.x)))
        throw DomainError("initial position lies outside the domain");
    if (spec.scheme == SchemeKind::stopped && potential.hamiltonian(c) > threshold(params) &&
        warnings != nullptr)
        warnings->push_back("initial state lies outside the threshold set H_delta");
}

void check_finite(double v, const std::string& what) {
    if (std::isnan(v)) throw NumericalFailure("NaN in aggregate: " + what);
}

}  // namespace

State Initializer::draw(NormalStream& stream, const Potential& potential) const {
    if (kind == InitKind::fixed) return center;
    if (!(sigma >= 0.0)) throw InvalidInput("init sigma must be non-negative");
    State z = center;
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (std::size_t i = 0; i < z.dim(); ++i) z.x[i] = center.x[i] + sigma * stream.normal();
        if (std::isfinite(potential.energy(z.x))) return z;
    }
    throw DomainError("gaussian-cloud initializer could not find a point inside the domain");
}

void RunSpec::validate() const {
    if (n_chains == 0) throw InvalidInput("n_chains must be at least 1");
    if (n_steps > 0 && burn_in >= n_steps) throw InvalidInput("burn_in must be below n_steps");
    if (n_steps == 0 && burn_in != 0) throw InvalidInput("burn_in must be 0 when n_steps is 0");
    if (record_stride == 0) throw InvalidInput("record_stride must be at least 1");
    if (n_chains - 1 > std::numeric_limits<std::uint32_t>::max())
        throw InvalidInput("too many chains for the stream counter");
    if (init.center.dim() == 0) throw InvalidInput("run needs an initial state");
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

EnsembleResult run_ensemble(const RunSpec& spec, const Potential& potential,
                            const SchemeParams& params, const std::vector<Observable>& observables,
                            SampleLog* log) {
    spec.validate();
    params.validate();
    EnsembleResult result;
    check_init(spec, potential, params, &result.warnings);

    const std::size_t n_obs = observables.size();
    std::vector<double> values(spec.n_chains * n_obs, kMissing);
    std::vector<ChainRun> runs(spec.n_chains);
    std::vector<std::vector<SampleRow>> rows(log != nullptr ? spec.n_chains : 0);

    auto record = [&](std::size_t chain, std::size_t step, const State& z) {
        SampleRow row{chain, step, potential.hamiltonian(z), {}};
        row.values.reserve(n_obs);
        for (const auto& f : observables) row.values.push_back(f(potential, z));
        rows[chain].push_back(std::move(row));
    };

    parallel_for(spec.n_chains, spec.threads, [&](std::size_t c) {
        NormalStream stream = derive_stream(spec.master_seed, spec.level, c);
        State z = spec.init.draw(stream, potential);
        Integrator integrator(potential, params, spec.scheme);
        if (log != nullptr) record(c, 0, z);
        runs[c] = evolve(z, stream, integrator, spec.n_steps, [&](std::size_t k, const State& s) {
            if (log != nullptr && k % spec.record_stride == 0) record(c, k, s);
        });
        if (!runs[c].escaped)
            for (std::size_t j = 0; j < n_obs; ++j) values[c * n_obs + j] = observables[j](potential, z);
    });

    std::uint64_t rejected = 0, steps = 0;
    double escape_steps = 0.0;
    for (const auto& r : runs) {
        rejected += r.rejected;
        steps += r.steps;
        if (r.escaped) {
            ++result.escape_count;
            escape_steps += static_cast<double>(r.escape_step);
        }
    }
    result.n_chains = spec.n_chains;
    result.rejection_rate = steps > 0 ? static_cast<double>(rejected) / static_cast<double>(steps) : 0.0;
    if (result.escape_count == spec.n_chains)
        throw EscapedEnsemble(result.escape_count, spec.n_chains,
                              escape_steps / static_cast<double>(result.escape_count));

    for (std::size_t j = 0; j < n_obs; ++j) {
        RunningStats acc;
        for (std::size_t c = 0; c < spec.n_chains; ++c)
            if (!runs[c].escaped) acc.push(values[c * n_obs + j]);
        ObservableSummary s{observables[j].name, acc.mean(), acc.variance(), acc.ci95(),
                            static_cast<double>(acc.count())};
        check_finite(s.mean, s.name + " mean");
        check_finite(s.variance, s.name + " variance");
        result.observables.push_back(std::move(s));
    }

    if (log != nullptr)
        for (auto& chain_rows : rows)
            for (auto& row : chain_rows) log->rows.push_back(std::move(row));
    return result;
}

namespace {

struct ChainAverage {
    BatchMeans stats;
    ChainRun run;
};

ChainAverage chain_time_average(const RunSpec& spec, std::size_t chain, const Potential& potential,
                                const SchemeParams& params, const Observable& observable) {
    NormalStream stream = derive_stream(spec.master_seed, spec.level, chain);
    State z = spec.init.draw(stream, potential);
    Integrator integrator(potential, params, spec.scheme);
    BatchMeansAccumulator acc(spec.n_steps - spec.burn_in);
    ChainRun run = evolve(z, stream, integrator, spec.n_steps, [&](std::size_t k, const State& s) {
        if (k > spec.burn_in) acc.push(observable(potential, s));
    });
    if (run.escaped) return {{kMissing, kMissing, 0.0, 0}, run};
    return {acc.result(), run};
}

void check_ergodic_spec(const RunSpec& spec) {
    spec.validate();
    if (spec.n_steps == 0 || spec.burn_in >= spec.n_steps)
        throw InvalidInput("time average needs burn_in < n_steps");
}

}  // namespace

TimeAverage ergodic_average(const RunSpec& spec, const Potential& potential,
                            const SchemeParams& params, const Observable& observable) {
    if (spec.n_chains != 1) throw InvalidInput("ergodic_average runs exactly one chain");
    return ergodic_average_ensemble(spec, potential, params, observable);
}

TimeAverage ergodic_average_ensemble(const RunSpec& spec, const Potential& potential,
                                     const SchemeParams& params, const Observable& observable) {
    check_ergodic_spec(spec);
    params.validate();
    check_init(spec, potential, params, nullptr);

    std::vector<ChainAverage> chains(spec.n_chains);
    parallel_for(spec.n_chains, spec.threads, [&](std::size_t c) {
        chains[c] = chain_time_average(spec, c, potential, params, observable);
    });

    RunningStats means;
    double ci2 = 0.0, ess = 0.0, escape_steps = 0.0;
    std::uint64_t rejected = 0, steps = 0;
    std::size_t escaped = 0;
    for (const auto& ch : chains) {
        rejected += ch.run.rejected;
        steps += ch.run.steps;
        if (ch.run.escaped) {
            ++escaped;
            escape_steps += static_cast<double>(ch.run.escape_step);
            continue;
        }
        means.push(ch.stats.mean);
        ci2 += ch.stats.ci_halfwidth * ch.stats.ci_halfwidth;
        ess += ch.stats.n_effective;
    }
    if (escaped == spec.n_chains)
        throw EscapedEnsemble(escaped, spec.n_chains, escape_steps / static_cast<double>(escaped));
    const double n = static_cast<double>(means.count());
    TimeAverage out{means.mean(), std::sqrt(ci2) / n, ess,
                    steps > 0 ? static_cast<double>(rejected) / static_cast<double>(steps) : 0.0};
    check_finite(out.mean, observable.name + " time average");
    check_finite(out.ci_halfwidth, observable.name + " time-average interval");
    return out;
}

std::vector<std::size_t> log_checkpoints(std::size_t n_steps) {
    std::vector<std::size_t> cps{0};
    for (std::size_t k = 1; k < n_steps; k *= 2) cps.push_back(k);
    if (n_steps > 0) cps.push_back(n_steps);
    return cps;
}

std::vector<MomentPoint> exp_moment(const RunSpec& spec, const Potential& potential,
                                    const SchemeParams& params, double b) {
    spec.validate();
    params.validate();
    if (!(b > 0.0) || !(b < params.beta)) throw InvalidInput("exp moment needs 0 < b < beta");
    check_init(spec, potential, params, nullptr);

    const auto cps = log_checkpoints(spec.n_steps);
    const std::size_t m = cps.size();
    std::vector<double> values(spec.n_chains * m, kMissing);
    parallel_for(spec.n_chains, spec.threads, [&](std::size_t c) {
        NormalStream stream = derive_stream(spec.master_seed, spec.level, c);
        State z = spec.init.draw(stream, potential);
        Integrator integrator(potential, params, spec.scheme);
        double* row = values.data() + c * m;
        row[0] = std::exp(b * potential.hamiltonian(z));
        std::size_t next = 1;
        evolve(z, stream, integrator, spec.n_steps, [&](std::size_t k, const State& s) {
            if (next < m && k == cps[next]) row[next++] = std::exp(b * potential.hamiltonian(s));
        });
    });

    std::vector<MomentPoint> curve;
    curve.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        RunningStats acc;
        for (std::size_t c = 0; c < spec.n_chains; ++c) {
            const double v = values[c * m + j];
            if (!std::isnan(v)) acc.push(v);
        }
        if (acc.count() == 0) throw EscapedEnsemble(spec.n_chains, spec.n_chains, 0.0);
        curve.push_back({cps[j], acc.mean(), acc.ci95()});
    }
    return curve;
}

TailEstimate tail_probability(const RunSpec& spec, const Potential& potential,
                              const SchemeParams& params, double a) {
    spec.validate();
    params.validate();
    if (!(a >= 0.0)) throw InvalidInput("tail level must be non-negative");
    check_init(spec, potential, params, nullptr);

    std::vector<unsigned char> exceed(spec.n_chains, 0);
    parallel_for(spec.n_chains, spec.threads, [&](std::size_t c) {
        NormalStream stream = derive_stream(spec.master_seed, spec.level, c);
        State z = spec.init.draw(stream, potential);
        Integrator integrator(potential, params, spec.scheme);
        const ChainRun run = evolve(z, stream, integrator, spec.n_steps, [](std::size_t, const State&) {});
        exceed[c] = run.escaped || potential.hamiltonian(z) >= a;
    });
    std::size_t hits = 0;
    for (auto e : exceed) hits += e;
    const double n = static_cast<double>(spec.n_chains);
    const double p = static_cast<double>(hits) / n;
    return {p, kZ95 * std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace langevin
