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


#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "langevin/errors.hpp"
#include "langevin/potential.hpp"

using namespace langevin;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Plain 4 (r^-12 - r^-6) for comparison with the shifted pair term.
double raw_lj(double r) { return 4.0 * (std::pow(r, -12) - std::pow(r, -6)); }

std::vector<Potential> all_kinds() {
    return {Potential::harmonic(3, 1.7), Potential::double_well(2, 0.8),
            Potential::lennard_jones_confined(3, 2), Potential::composite(3, 2, 1.0, 0.7, 1.1)};
}

// Random positions; for pair potentials every pair is kept at distance > 0.5.
std::vector<double> random_interior(const Potential& pot, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    const std::size_t k = pot.params().space_dim;
    const std::size_t n = pot.params().n_particles;
    while (true) {
        std::vector<double> x(pot.dim());
        for (double& v : x) v = uni(gen);
        if (!pot.has_pairs()) return x;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                double r2 = 0.0;
                for (std::size_t a = 0; a < k; ++a) r2 += std::pow(x[i * k + a] - x[j * k + a], 2);
                ok = r2 > 0.25;
            }
        if (ok) return x;
    }
}

double fd_relative_error(const Potential& pot, const std::vector<double>& x) {
    const auto g = pot.gradient(x);
    const double h = kGradientFdStep;
    double err = 0.0, scale = 0.0;
    auto xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        const double fd = (pot.energy(xp) - pot.energy(xm)) / (2.0 * h);
        xp[i] = xm[i] = x[i];
        err = std::max(err, std::abs(fd - g[i]));
        scale = std::max(scale, std::abs(g[i]));
    }
    return err / std::max(scale, 1.0);
}

}  // namespace

TEST_CASE("energy examples") {
    const auto h = Potential::harmonic(3);
    CHECK(h.energy(std::vector<double>{0, 0, 0}) == 0.0);
    CHECK(h.energy(std::vector<double>{1, 2, 2}) == doctest::Approx(4.5));

    const auto lj = Potential::lennard_jones_confined(2, 1);
    // Unit separation: raw pair term 0, shifted by +1.
    CHECK(lj.pair_energy(std::vector<double>{0.0, 1.0}) == doctest::Approx(raw_lj(1.0) + 1.0));
    CHECK(raw_lj(1.0) == 0.0);
    // At the pair minimum the raw term is -1 and the shifted term 0.
    const double rmin = std::pow(2.0, 1.0 / 6.0);
    CHECK(raw_lj(rmin) == doctest::Approx(-1.0));
    CHECK(lj.pair_energy(std::vector<double>{0.0, rmin}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(lj.pair_energy(std::vector<double>{0.3, 1.7}) == doctest::Approx(raw_lj(1.4) + 1.0));
    // Confinement adds kappa |x|^2 / 2.
    CHECK(lj.energy(std::vector<double>{0.3, 1.7}) ==
          doctest::Approx(raw_lj(1.4) + 1.0 + 0.5 * (0.09 + 2.89)));

    const auto dw = Potential::double_well(1, 2.0);
    CHECK(dw.energy(std::vector<double>{1.0}) == 0.0);
    CHECK(dw.energy(std::vector<double>{0.0}) == doctest::Approx(0.5));
}

TEST_CASE("energy outside the domain is +inf") {
    const auto lj = Potential::lennard_jones_confined(3, 2);
    const std::vector<double> x{0.5, 0.5, 0.5, 0.5, -1.0, 0.0};
    CHECK(std::isinf(lj.energy(x)));
    CHECK(lj.energy(x) > 0.0);
    CHECK(std::isinf(lj.hamiltonian(State::at_rest(x))));
    CHECK_THROWS_AS(lj.gradient(x), DomainError);
    // Far below the representable r^-12: still the sentinel, never NaN.
    const std::vector<double> tiny{0.0, 0.0, 1e-200, 0.0, 2.0, 0.0};
    CHECK(std::isinf(lj.energy(tiny)));
}

TEST_CASE("dimension and NaN discipline") {
    const auto h = Potential::harmonic(2);
    CHECK_THROWS_AS(h.energy(std::vector<double>{1.0}), InvalidInput);
    CHECK_THROWS_AS(h.gradient(std::vector<double>{1.0, 2.0, 3.0}), InvalidInput);
    for (const auto& pot : all_kinds()) {
        std::vector<double> x(pot.dim(), 0.25);
        x[0] = kNaN;
        CHECK_THROWS_AS(pot.energy(x), DomainError);
        CHECK_THROWS_AS(pot.gradient(x), DomainError);
    }
}

TEST_CASE("gradient examples") {
    const auto h = Potential::harmonic(2);
    const auto g = h.gradient(std::vector<double>{1.0, 2.0});
    CHECK(g[0] == 1.0);
    CHECK(g[1] == 2.0);

    // d/dr 4(r^-12 - r^-6) at r = 1 is -24; the particle at +r feels it directly.
    const auto lj = Potential::lennard_jones_confined(2, 1);
    const std::vector<double> x{0.0, 1.0};
    const auto gl = lj.gradient(x);
    const double kappa = lj.params().confinement_stiffness;
    CHECK(gl[1] - kappa * x[1] == doctest::Approx(-24.0));
    CHECK(gl[0] - kappa * x[0] == doctest::Approx(24.0));
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 gen(2024);
    for (const auto& pot : all_kinds()) {
        CAPTURE(to_string(pot.kind()));
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) worst = std::max(worst, fd_relative_error(pot, random_interior(pot, gen)));
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("pair sum is translation invariant") {
    std::mt19937_64 gen(7);
    const auto lj = Potential::lennard_jones_confined(4, 3);
    for (int k = 0; k < 20; ++k) {
        auto x = random_interior(lj, gen);
        const double before = lj.pair_energy(x);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += (i % 3 == 0 ? 1.3 : -0.4);
        CHECK(lj.pair_energy(x) == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("pair potentials are non-negative on the domain") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    for (const auto& pot : {Potential::lennard_jones_confined(3, 1), Potential::composite(3, 2)}) {
        const double rmin = std::pow(2.0, 1.0 / 6.0);
        for (int k = 0; k < 2000; ++k) {
            std::vector<double> x(pot.dim());
            for (double& v : x) v = uni(gen);
            const double u = pot.energy(x);
            CHECK(u >= 0.0);
            CHECK_FALSE(std::isnan(u));
        }
        // The pair minimum touches zero pair energy.
        auto x = pot.reference_minimum();
        x[pot.params().space_dim] = x[0] + rmin;
        CHECK(pot.pair_energy(x) >= 0.0);
    }
}

TEST_CASE("hamiltonian examples") {
    const auto h = Potential::harmonic(2);
    CHECK(h.hamiltonian(State({0, 0}, {0, 0})) == 0.0);
    CHECK(h.hamiltonian(State({0, 0}, {2, 0})) == 2.0);
    const auto lj = Potential::lennard_jones_confined(2, 1);
    CHECK(std::isinf(lj.hamiltonian(State({0.4, 0.4}, {0, 0}))));
}

TEST_CASE("reference minimum lies in the domain") {
    for (const auto& pot : all_kinds()) {
        const auto x = pot.reference_minimum();
        CHECK(x.size() == pot.dim());
        CHECK(std::isfinite(pot.energy(x)));
    }
}

TEST_CASE("collision crossing along a segment") {
    const auto lj = Potential::lennard_jones_confined(2, 1);
    CHECK(lj.segment_crosses_singularity(std::vector<double>{-0.5, 0.5}, std::vector<double>{0.5, -0.5}));
    CHECK_FALSE(lj.segment_crosses_singularity(std::vector<double>{-0.5, 0.5}, std::vector<double>{-0.6, 0.7}));
    const auto lj2 = Potential::lennard_jones_confined(2, 2);
    // Head-on through each other versus passing side by side.
    CHECK(lj2.segment_crosses_singularity(std::vector<double>{-1, 0, 1, 0}, std::vector<double>{1, 0, -1, 0}));
    CHECK_FALSE(lj2.segment_crosses_singularity(std::vector<double>{-1, 0, 1, 0.5}, std::vector<double>{1, 0, -1, 0.5}));
    CHECK_FALSE(Potential::harmonic(2).segment_crosses_singularity(std::vector<double>{1, 0}, std::vector<double>{-1, 0}));
}

TEST_CASE("assumption diagnostics") {
    const auto h = Potential::harmonic(1);
    const auto rows = assumption_diagnostics(h, {{10.0}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].hessian_ratio == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(rows[0].energy == doctest::Approx(50.0));
    CHECK(rows[0].grad_norm == doctest::Approx(10.0));
    // |U'|^2 / U^(2 - 2/2) = x^2 / (x^2 / 2) = 2 for the quadratic.
    CHECK(rows[0].lower_sandwich == doctest::Approx(2.0).epsilon(1e-9));

    CHECK(assumption_diagnostics(h, {}).empty());

    const auto lj = Potential::lennard_jones_confined(2, 1);
    const auto ladder = assumption_diagnostics(lj, ladder_probes(lj, {0.9, 0.8}));
    REQUIRE(ladder.size() == 2);
    CHECK(ladder[1].hessian_ratio < ladder[0].hessian_ratio);
    CHECK(ladder[1].energy > ladder[0].energy);

    // With a third particle the ladder must stay clear of it: beyond the
    // minimum the energy grows only through the confinement.
    const auto trio = Potential::lennard_jones_confined(3, 2);
    const auto probes = ladder_probes(trio, {1.5, 3, 10});
    for (const auto& x : probes) CHECK(x[3] == 0.0);
    CHECK(probes[1][2] - probes[1][0] == doctest::Approx(3.0));
    const auto far = assumption_diagnostics(trio, probes);
    CHECK(far[0].energy < far[1].energy);
    CHECK(far[1].energy < far[2].energy);
    CHECK(far[2].energy < 0.5 * 12.0 * 12.0 + 2.0);

    const auto series = assumption_diagnostics(h, ladder_probes(h, {1.5, 2, 4, 8, 16, 32}));
    for (std::size_t i = 1; i < series.size(); ++i)
        CHECK(series[i].hessian_ratio < series[i - 1].hessian_ratio);

    CHECK_THROWS_AS(assumption_diagnostics(lj, {{0.2, 0.2}}), DomainError);
}

TEST_CASE("kind names round trip") {
    for (auto k : {PotentialKind::harmonic, PotentialKind::double_well,
                   PotentialKind::lennard_jones_confined, PotentialKind::composite})
        CHECK(parse_potential_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_potential_kind("morse"), InvalidInput);
}
