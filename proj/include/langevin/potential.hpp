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
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "langevin/state.hpp"

namespace langevin {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class PotentialKind {
    harmonic,                // U = k/2 |x|^2
    double_well,             // U = k/4 sum_i (x_i^2 - 1)^2
    lennard_jones_confined,  // quadratic confinement + shifted LJ pairs
    composite,               // double-well confinement + shifted LJ pairs
};

std::string_view to_string(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view name);

struct PotentialParams {
    std::size_t n_particles = 1;
    std::size_t space_dim = 1;
    double confinement_stiffness = 1.0;
    double lj_epsilon = 1.0;
    double lj_sigma = 1.0;
};

// Energy U: R^d -> [0, +inf] together with its analytic gradient.
//
// Pair terms use the shifted Lennard-Jones form
//     eps * (4 ((s/r)^12 - (s/r)^6) + 1) = eps * (2 (s/r)^6 - 1)^2,
// summed once per unordered pair, so U >= 0 holds exactly. U is +inf iff two
// particles coincide (or the arithmetic overflows); that value is the only
// "outside the domain" signal. Objects are immutable and thread-safe.
class Potential {
public:
    static Potential harmonic(std::size_t dim, double stiffness = 1.0);
    static Potential double_well(std::size_t dim, double stiffness = 1.0);
    static Potential lennard_jones_confined(std::size_t n_particles, std::size_t space_dim,
                                            double stiffness = 1.0, double epsilon = 1.0,
                                            double sigma = 1.0);
    static Potential composite(std::size_t n_particles, std::size_t space_dim,
                               double stiffness = 1.0, double epsilon = 1.0, double sigma = 1.0);
    static Potential make(PotentialKind kind, const PotentialParams& params);

    PotentialKind kind() const { return kind_; }
    const PotentialParams& params() const { return params_; }
    std::size_t dim() const { return params_.n_particles * params_.space_dim; }
    std::vector<std::pair<std::string, double>> named_params() const;

    bool is_quadratic() const { return kind_ == PotentialKind::harmonic; }
    bool has_pairs() const {
        return kind_ == PotentialKind::lennard_jones_confined || kind_ == PotentialKind::composite;
    }

    /// U(x), +inf outside D. Throws InvalidInput on dimension mismatch.
    double energy(std::span<const double> x) const;

    /// grad U(x) written to `out`. Throws DomainError if U(x) is not finite.
    void gradient(std::span<const double> x, std::span<double> out) const;
    std::vector<double> gradient(std::span<const double> x) const;

    /// Pair-interaction part only (0 for potentials without pairs).
    double pair_energy(std::span<const double> x) const;

    /// True if the straight segment from `from` to `to` passes through a pair
    /// collision, i.e. some relative position r + s (r' - r), s in [0, 1],
    /// vanishes. In one space dimension this is a change of particle order.
    bool segment_crosses_singularity(std::span<const double> from, std::span<const double> to) const;

    /// H(x, y) = U(x) + |y|^2/2, +inf iff U(x) is.
    double hamiltonian(const State& s) const;

    /// A low-energy configuration inside D: origin, the well at +1, or
    /// particles on a line along the first axis spaced by the LJ minimum.
    std::vector<double> reference_minimum() const;

private:
    Potential(PotentialKind kind, PotentialParams params);
    void check_dim(std::size_t n) const;

    PotentialKind kind_;
    PotentialParams params_;
};

// One row of the growth-assumption diagnostics.
struct GrowthDiagnostic {
    double energy;
    double grad_norm;
    double hessian_norm;     // Frobenius norm of the finite-difference Hessian
    double hessian_ratio;    // |Hess U| / |grad U|^2
    double lower_sandwich;   // |grad U|^2 / U^(2 - 2/eta_inf)
    double upper_sandwich;   // |grad U|^2 / U^(2 + 2/eta_0)
};

struct GrowthExponents {
    double eta_inf = 2.0;   // quadratic growth at infinity
    double eta_0 = 12.0;    // r^-12 blow-up at the pair singularity
};

inline constexpr double kGradientFdStep = 1e-5;
inline constexpr double kHessianFdStep = 1e-4;

/// Raw ratios at each probe point; makes no pass/fail decision.
/// Throws DomainError for a probe outside D.
std::vector<GrowthDiagnostic> assumption_diagnostics(const Potential& potential,
                                                     const std::vector<std::vector<double>>& probes,
                                                     GrowthExponents exponents = {});

/// Positions along the diagnostic ladder: the first coordinate set to each
/// value for single-body potentials, the separation of particles 0 and 1
/// for pair potentials (particle 0 moves, on the outer side of particle 1).
/// Other coordinates stay at the reference minimum.
std::vector<std::vector<double>> ladder_probes(const Potential& potential,
                                               const std::vector<double>& ladder);

}  // namespace langevin
