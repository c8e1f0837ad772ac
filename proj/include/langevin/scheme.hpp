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

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "langevin/potential.hpp"
#include "langevin/rng.hpp"
#include "langevin/state.hpp"
#include "langevin/stats.hpp"

namespace langevin {

enum class SchemeKind { stopped, unstopped };

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(std::string_view name);

struct SchemeParams {
    double delta = 0.01;  // time step
    double gamma = 1.0;   // friction
    double beta = 1.0;    // inverse temperature
    double l = 0.1;       // threshold exponent, H_delta = {H <= delta^-l}

    // delta, beta, l > 0, l <= 0.5, gamma >= 0 and delta * gamma < 1.
    // gamma = 0 is accepted as the deterministic Hamiltonian limit.
    void validate() const;

    double noise_scale() const { return std::sqrt(2.0 * gamma * delta / beta); }
};

inline constexpr double kMaxThresholdExponent = 0.5;

/// Energy ceiling delta^-l of the accepted set H_delta.
double threshold(const SchemeParams& params);

struct LyapunovParams {
    double b = 0.5;
    double zeta = 4.0;   // 4 d gamma / beta
    double r1 = 10.0;
    double r2 = 20.0;

    /// zeta is fixed by (dim, gamma, beta); b must lie in (0, beta).
    static LyapunovParams make(double b, std::size_t dim, const SchemeParams& params,
                               double r1 = 10.0, double r2 = 20.0);
    void validate(const SchemeParams& params, std::size_t dim) const;
};

/// C^2 smoothstep cutoff: 0 below r1, 1 above r2.
double smooth_cutoff(double theta, double r1, double r2);

/// Proposal map E_delta(x, y, g): velocity kick, friction and noise first,
/// then the position drift with the new velocity.
/// Throws DomainError if U(x) is infinite.
State propose(const State& state, std::span<const double> gaussian, const Potential& potential,
              const SchemeParams& params);

struct StepOutcome {
    State state;
    bool accepted;
};

struct UnstoppedOutcome {
    State state;   // the pre-step state when escaped
    bool escaped;
};

enum class StepStatus { accepted, rejected, escaped };

// In-place one-step engine with preallocated scratch; this is the hot loop
// of the sampler. One instance per chain; not shareable across threads.
class Integrator {
public:
    Integrator(const Potential& potential, const SchemeParams& params, SchemeKind kind);

    const Potential& potential() const { return *potential_; }
    const SchemeParams& params() const { return params_; }
    SchemeKind kind() const { return kind_; }
    double ceiling() const { return ceiling_; }

    /// Draws exactly d normals, then applies the stopped or unstopped rule.
    /// Stopped: a proposal outside H_delta (including a non-finite one) leaves
    /// the state untouched. Unstopped: a proposal with infinite energy, a move
    /// whose path crosses a pair collision, or a gradient overflow at the
    /// current point leaves the state untouched and reports `escaped`. Throws DomainError if a stopped step starts outside D.
    template <GaussianStream S>
    StepStatus advance(State& s, S& stream) {
        const std::size_t d = s.dim();
        for (std::size_t i = 0; i < d; ++i) noise_[i] = stream.normal();
        if (kind_ == SchemeKind::unstopped) {
            if (!try_gradient(s.x)) return StepStatus::escaped;
        } else {
            potential_->gradient(s.x, grad_);
        }
        make_proposal(s);
        const double h = proposal_energy();
        if (kind_ == SchemeKind::stopped) {
            if (!(h <= ceiling_)) return StepStatus::rejected;
        } else if (!std::isfinite(h) || potential_->segment_crosses_singularity(s.x, x_new_)) {
            return StepStatus::escaped;
        }
        s.x.swap(x_new_);
        s.y.swap(y_new_);
        return StepStatus::accepted;
    }

private:
    bool try_gradient(std::span<const double> x);
    void make_proposal(const State& s);
    double proposal_energy() const;

    const Potential* potential_;
    SchemeParams params_;
    SchemeKind kind_;
    double ceiling_;
    double noise_scale_;
    std::vector<double> grad_, noise_, x_new_, y_new_;
};

/// One step of the stopped scheme; consumes exactly d draws in both branches.
template <GaussianStream S>
StepOutcome step_stopped(const State& state, S& stream, const Potential& potential,
                         const SchemeParams& params) {
    Integrator integrator(potential, params, SchemeKind::stopped);
    State out = state;
    const StepStatus status = integrator.advance(out, stream);
    return {std::move(out), status == StepStatus::accepted};
}

/// One step of the unstopped symplectic Euler-Maruyama scheme.
template <GaussianStream S>
UnstoppedOutcome step_unstopped(const State& state, S& stream, const Potential& potential,
                                const SchemeParams& params) {
    Integrator integrator(potential, params, SchemeKind::unstopped);
    State out = state;
    const StepStatus status = integrator.advance(out, stream);
    return {std::move(out), status == StepStatus::escaped};
}

/// V_b(x, y) = exp(b (H + zeta h(U) y.grad U / (1 + |grad U|^2))).
double lyapunov(const State& state, const Potential& potential, const SchemeParams& params,
                const LyapunovParams& lyap);

struct DriftEstimate {
    double mean;
    double ci_halfwidth;
};

/// Monte Carlo estimate of E[V_b(Z_1)] after one stopped step from `state`.
template <GaussianStream S>
DriftEstimate lyapunov_drift_probe(const State& state, std::size_t n_samples, S& stream,
                                   const Potential& potential, const SchemeParams& params,
                                   const LyapunovParams& lyap) {
    if (n_samples < 2) throw InvalidInput("drift probe needs at least 2 samples");
    params.validate();
    lyap.validate(params, state.dim());
    Integrator integrator(potential, params, SchemeKind::stopped);
    RunningStats acc;
    State z;
    for (std::size_t k = 0; k < n_samples; ++k) {
        z = state;
        integrator.advance(z, stream);
        acc.push(lyapunov(z, potential, params, lyap));
    }
    return {acc.mean(), acc.ci95()};
}

}  // namespace langevin
