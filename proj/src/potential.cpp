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

#include "langevin/potential.hpp"

#include <algorithm>
#include <cmath>

namespace langevin {

namespace {

// (sigma / r)^6 from the squared distance; +inf on coincidence or overflow.
double inverse_sixth(double r2, double sigma) {
    if (r2 == 0.0) return kInfinity;
    const double q = sigma * sigma / r2;
    return q * q * q;
}

double quadratic_confinement(std::span<const double> x, double k) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * k * s;
}

double double_well_confinement(std::span<const double> x, double k) {
    double s = 0.0;
    for (double v : x) {
        const double w = v * v - 1.0;
        s += w * w;
    }
    return 0.25 * k * s;
}

}  // namespace

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::harmonic: return "harmonic";
        case PotentialKind::double_well: return "double-well";
        case PotentialKind::lennard_jones_confined: return "lennard-jones-confined";
        case PotentialKind::composite: return "composite";
    }
    return "unknown";
}

PotentialKind parse_potential_kind(std::string_view name) {
    if (name == "harmonic") return PotentialKind::harmonic;
    if (name == "double-well") return PotentialKind::double_well;
    if (name == "lennard-jones-confined") return PotentialKind::lennard_jones_confined;
    if (name == "composite") return PotentialKind::composite;
    throw InvalidInput("unknown potential kind '" + std::string(name) + "'");
}

Potential::Potential(PotentialKind kind, PotentialParams params)
    : kind_(kind), params_(params) {
    if (params_.n_particles == 0 || params_.space_dim == 0)
        throw InvalidInput("potential needs at least one particle and one space dimension");
    if (!(params_.confinement_stiffness > 0.0))
        throw InvalidInput("confinement stiffness must be positive");
    if (has_pairs()) {
        if (params_.n_particles < 2)
            throw InvalidInput("pair potentials need at least two particles");
        if (!(params_.lj_epsilon > 0.0) || !(params_.lj_sigma > 0.0))
            throw InvalidInput("lj_epsilon and lj_sigma must be positive");
    }
}

Potential Potential::harmonic(std::size_t dim, double stiffness) {
    return Potential(PotentialKind::harmonic, {dim, 1, stiffness, 1.0, 1.0});
}

Potential Potential::double_well(std::size_t dim, double stiffness) {
    return Potential(PotentialKind::double_well, {dim, 1, stiffness, 1.0, 1.0});
}

Potential Potential::lennard_jones_confined(std::size_t n_particles, std::size_t space_dim,
                                            double stiffness, double epsilon, double sigma) {
    return Potential(PotentialKind::lennard_jones_confined,
                     {n_particles, space_dim, stiffness, epsilon, sigma});
}

Potential Potential::composite(std::size_t n_particles, std::size_t space_dim, double stiffness,
                               double epsilon, double sigma) {
    return Potential(PotentialKind::composite, {n_particles, space_dim, stiffness, epsilon, sigma});
}

Potential Potential::make(PotentialKind kind, const PotentialParams& params) {
    return Potential(kind, params);
}

std::vector<std::pair<std::string, double>> Potential::named_params() const {
    std::vector<std::pair<std::string, double>> out{
        {"n_particles", static_cast<double>(params_.n_particles)},
        {"space_dim", static_cast<double>(params_.space_dim)},
        {"confinement_stiffness", params_.confinement_stiffness},
    };
    if (has_pairs()) {
        out.emplace_back("lj_epsilon", params_.lj_epsilon);
        out.emplace_back("lj_sigma", params_.lj_sigma);
    }
    return out;
}

void Potential::check_dim(std::size_t n) const {
    if (n != dim())
        throw InvalidInput("position has dimension " + std::to_string(n) + ", potential expects " +
                           std::to_string(dim()));
}

double Potential::pair_energy(std::span<const double> x) const {
    check_dim(x.size());
    if (!has_pairs()) return 0.0;
    const std::size_t n = params_.n_particles;
    const std::size_t k = params_.space_dim;
    const double eps = params_.lj_epsilon;
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double r2 = 0.0;
            for (std::size_t a = 0; a < k; ++a) {
                const double dx = x[i * k + a] - x[j * k + a];
                r2 += dx * dx;
            }
            const double s6 = inverse_sixth(r2, params_.lj_sigma);
            if (!std::isfinite(s6)) return kInfinity;
            const double w = 2.0 * s6 - 1.0;
            u += eps * w * w;
        }
    }
    return u;
}

bool Potential::segment_crosses_singularity(std::span<const double> from,
                                            std::span<const double> to) const {
    check_dim(from.size());
    check_dim(to.size());
    if (!has_pairs()) return false;
    const std::size_t n = params_.n_particles;
    const std::size_t k = params_.space_dim;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0, a2 = 0.0, b2 = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                const double a = from[i * k + c] - from[j * k + c];
                const double b = to[i * k + c] - to[j * k + c];
                dot += a * b;
                a2 += a * a;
                b2 += b * b;
            }
            // Anti-parallel endpoints (or an endpoint at the collision).
            if (a2 == 0.0 || b2 == 0.0) return true;
            if (dot <= 0.0 && dot * dot >= a2 * b2 * (1.0 - 1e-12)) return true;
        }
    }
    return false;
}

double Potential::energy(std::span<const double> x) const {
    check_dim(x.size());
    double u = 0.0;
    switch (kind_) {
        case PotentialKind::harmonic:
            u = quadratic_confinement(x, params_.confinement_stiffness);
            break;
        case PotentialKind::double_well:
            u = double_well_confinement(x, params_.confinement_stiffness);
            break;
        case PotentialKind::lennard_jones_confined:
            u = quadratic_confinement(x, params_.confinement_stiffness) + pair_energy(x);
            break;
        case PotentialKind::composite:
            u = double_well_confinement(x, params_.confinement_stiffness) + pair_energy(x);
            break;
    }
    if (std::isnan(u)) throw DomainError("energy evaluated to NaN (non-finite position?)");
    return u;
}

void Potential::gradient(std::span<const double> x, std::span<double> out) const {
    check_dim(x.size());
    if (out.size() != x.size()) throw InvalidInput("gradient output has the wrong dimension");
    if (!std::isfinite(energy(x))) throw DomainError("gradient requested outside the domain");

    const double kc = params_.confinement_stiffness;
    switch (kind_) {
        case PotentialKind::harmonic:
        case PotentialKind::lennard_jones_confined:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = kc * x[i];
            break;
        case PotentialKind::double_well:
        case PotentialKind::composite:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = kc * x[i] * (x[i] * x[i] - 1.0);
            break;
    }

    if (has_pairs()) {
        const std::size_t n = params_.n_particles;
        const std::size_t k = params_.space_dim;
        const double eps = params_.lj_epsilon;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double r2 = 0.0;
                for (std::size_t a = 0; a < k; ++a) {
                    const double dx = x[i * k + a] - x[j * k + a];
                    r2 += dx * dx;
                }
                const double s6 = inverse_sixth(r2, params_.lj_sigma);
                // dU/dr = -24 eps s6 (2 s6 - 1) / r, projected on (x_i - x_j) / r
                const double coef = -24.0 * eps * s6 * (2.0 * s6 - 1.0) / r2;
                for (std::size_t a = 0; a < k; ++a) {
                    const double f = coef * (x[i * k + a] - x[j * k + a]);
                    out[i * k + a] += f;
                    out[j * k + a] -= f;
                }
            }
        }
    }

    for (double g : out)
        if (!std::isfinite(g)) throw DomainError("gradient overflow near the singular set");
}

std::vector<double> Potential::gradient(std::span<const double> x) const {
    std::vector<double> g(x.size());
    gradient(x, g);
    return g;
}

double Potential::hamiltonian(const State& s) const {
    const double u = energy(s.x);
    if (!std::isfinite(u)) return kInfinity;
    if (s.y.size() != s.x.size()) throw InvalidInput("velocity has the wrong dimension");
    const double h = u + kinetic_energy(s);
    if (std::isnan(h)) throw DomainError("hamiltonian evaluated to NaN");
    return h;
}

std::vector<double> Potential::reference_minimum() const {
    std::vector<double> x(dim(), 0.0);
    switch (kind_) {
        case PotentialKind::harmonic:
            break;
        case PotentialKind::double_well:
            std::fill(x.begin(), x.end(), 1.0);
            break;
        case PotentialKind::lennard_jones_confined:
        case PotentialKind::composite: {
            const double spacing = std::pow(2.0, 1.0 / 6.0) * params_.lj_sigma;
            const std::size_t n = params_.n_particles;
            for (std::size_t i = 0; i < n; ++i)
                x[i * params_.space_dim] =
                    (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * spacing;
            break;
        }
    }
    return x;
}

std::vector<std::vector<double>> ladder_probes(const Potential& potential,
                                               const std::vector<double>& ladder) {
    std::vector<std::vector<double>> probes;
    probes.reserve(ladder.size());
    const std::size_t k = potential.params().space_dim;
    for (double v : ladder) {
        auto x = potential.reference_minimum();
        if (potential.has_pairs()) {
            // Particle 0 moves to distance v from particle 1 on the side away
            // from the rest of the chain, so no third particle gets in the way.
            for (std::size_t a = 0; a < k; ++a) x[a] = x[k + a];
            x[0] = x[k] - v;
        } else {
            x[0] = v;
        }
        probes.push_back(std::move(x));
    }
    return probes;
}

std::vector<GrowthDiagnostic> assumption_diagnostics(const Potential& potential,
                                                     const std::vector<std::vector<double>>& probes,
                                                     GrowthExponents exponents) {
    std::vector<GrowthDiagnostic> rows;
    rows.reserve(probes.size());
    const std::size_t d = potential.dim();
    std::vector<double> gp(d), gm(d), shifted;
    for (const auto& x : probes) {
        const double u = potential.energy(x);
        if (!std::isfinite(u)) throw DomainError("diagnostic probe outside the domain");
        const auto g = potential.gradient(x);
        double g2 = 0.0;
        for (double v : g) g2 += v * v;

        // Hessian by central differences of the analytic gradient, symmetrised.
        std::vector<double> hess(d * d);
        shifted = x;
        for (std::size_t j = 0; j < d; ++j) {
            shifted[j] = x[j] + kHessianFdStep;
            potential.gradient(shifted, gp);
            shifted[j] = x[j] - kHessianFdStep;
            potential.gradient(shifted, gm);
            shifted[j] = x[j];
            for (std::size_t i = 0; i < d; ++i)
                hess[i * d + j] = (gp[i] - gm[i]) / (2.0 * kHessianFdStep);
        }
        double h2 = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double s = 0.5 * (hess[i * d + j] + hess[j * d + i]);
                h2 += s * s;
            }
        const double hn = std::sqrt(h2);
        GrowthDiagnostic row;
        row.energy = u;
        row.grad_norm = std::sqrt(g2);
        row.hessian_norm = hn;
        row.hessian_ratio = g2 > 0.0 ? hn / g2 : kInfinity;
        if (u > 0.0) {
            row.lower_sandwich = g2 / std::pow(u, 2.0 - 2.0 / exponents.eta_inf);
            row.upper_sandwich = g2 / std::pow(u, 2.0 + 2.0 / exponents.eta_0);
        } else {
            row.lower_sandwich = row.upper_sandwich = g2 > 0.0 ? kInfinity : 0.0;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace langevin
