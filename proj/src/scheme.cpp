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

#include "langevin/scheme.hpp"

#include <algorithm>
#include <string>

namespace langevin {

std::string_view to_string(SchemeKind kind) {
    return kind == SchemeKind::stopped ? "stopped" : "unstopped";
}

SchemeKind parse_scheme_kind(std::string_view name) {
    if (name == "stopped") return SchemeKind::stopped;
    if (name == "unstopped") return SchemeKind::unstopped;
    throw InvalidInput("unknown scheme kind '" + std::string(name) + "'");
}

void SchemeParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("delta must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be non-negative");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("beta must be positive");
    if (!(l > 0.0) || l > kMaxThresholdExponent)
        throw InvalidInput("threshold exponent l must lie in (0, 0.5]");
    if (!(delta * gamma < 1.0)) throw InvalidInput("delta * gamma must be below 1");
}

double threshold(const SchemeParams& params) { return std::pow(params.delta, -params.l); }

LyapunovParams LyapunovParams::make(double b, std::size_t dim, const SchemeParams& params,
                                    double r1, double r2) {
    LyapunovParams p{b, 4.0 * static_cast<double>(dim) * params.gamma / params.beta, r1, r2};
    p.validate(params, dim);
    return p;
}

void LyapunovParams::validate(const SchemeParams& params, std::size_t dim) const {
    if (!(b > 0.0) || !(b < params.beta)) throw InvalidInput("lyapunov b must lie in (0, beta)");
    if (!(r1 > 0.0) || !(r1 < r2)) throw InvalidInput("lyapunov cutoff needs 0 < r1 < r2");
    const double expected = 4.0 * static_cast<double>(dim) * params.gamma / params.beta;
    if (zeta != expected) throw InvalidInput("lyapunov zeta must equal 4 d gamma / beta");
}

double smooth_cutoff(double theta, double r1, double r2) {
    if (theta <= r1) return 0.0;
    if (theta >= r2) return 1.0;
    const double u = (theta - r1) / (r2 - r1);
    return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

Integrator::Integrator(const Potential& potential, const SchemeParams& params, SchemeKind kind)
    : potential_(&potential), params_(params), kind_(kind), ceiling_(threshold(params)),
      noise_scale_(params.noise_scale()), grad_(potential.dim()), noise_(potential.dim()),
      x_new_(potential.dim()), y_new_(potential.dim()) {}

bool Integrator::try_gradient(std::span<const double> x) {
    if (!std::isfinite(potential_->energy(x)))
        throw DomainError("unstopped step started outside the domain");
    try {
        potential_->gradient(x, grad_);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

void Integrator::make_proposal(const State& s) {
    if (s.dim() != potential_->dim()) throw InvalidInput("state dimension does not match potential");
    const double dt = params_.delta;
    const double damp = dt * params_.gamma;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const double y = s.y[i] - dt * grad_[i] - damp * s.y[i] + noise_scale_ * noise_[i];
        y_new_[i] = y;
        x_new_[i] = s.x[i] + dt * y;
    }
}

double Integrator::proposal_energy() const {
    for (std::size_t i = 0; i < x_new_.size(); ++i)
        if (std::isnan(x_new_[i]) || std::isnan(y_new_[i])) return kInfinity;
    double kin = 0.0;
    for (double v : y_new_) kin += v * v;
    return potential_->energy(x_new_) + 0.5 * kin;
}

State propose(const State& state, std::span<const double> gaussian, const Potential& potential,
              const SchemeParams& params) {
    if (gaussian.size() != state.dim()) throw InvalidInput("need exactly d gaussian draws");
    const auto grad = potential.gradient(state.x);
    const double dt = params.delta;
    const double sigma = params.noise_scale();
    State out = state;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        out.y[i] = state.y[i] - dt * grad[i] - dt * params.gamma * state.y[i] + sigma * gaussian[i];
        out.x[i] = state.x[i] + dt * out.y[i];
    }
    return out;
}

double lyapunov(const State& state, const Potential& potential, const SchemeParams& params,
                const LyapunovParams& lyap) {
    (void)params;
    const double u = potential.energy(state.x);
    if (!std::isfinite(u)) throw DomainError("lyapunov function evaluated outside the domain");
    const double h = u + kinetic_energy(state);
    double correction = 0.0;
    const double cut = smooth_cutoff(u, lyap.r1, lyap.r2);
    if (cut > 0.0) {
        const auto g = potential.gradient(state.x);
        double yg = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            yg += state.y[i] * g[i];
            g2 += g[i] * g[i];
        }
        correction = lyap.zeta * cut * yg / (1.0 + g2);
    }
    return std::exp(lyap.b * (h + correction));
}

}  // namespace langevin
