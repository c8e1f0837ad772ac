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
#include <string>
#include <string_view>
#include <vector>

#include "langevin/potential.hpp"
#include "langevin/state.hpp"

namespace langevin {

// A variable of phase space: position x_i or velocity y_i.
struct Variable {
    bool velocity = false;
    std::size_t index = 0;
    bool operator==(const Variable&) const = default;
};

struct Monomial {
    double coefficient = 0.0;
    std::vector<std::pair<Variable, unsigned>> factors;  // variable, power >= 1
};

// Polynomial in the phase-space coordinates with exact partial derivatives.
// Text form: "x0^2", "x0*y0", "2.5*y1^2 - x0 + 1", "3" (constant).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Monomial> terms);

    static Polynomial parse(std::string_view text);
    static Polynomial constant(double c);

    double evaluate(const State& s) const;
    Polynomial derivative(Variable v) const;

    bool is_constant() const;
    /// Degree <= 1 in every monomial.
    bool is_affine() const;
    /// One past the largest coordinate index used (0 for a constant).
    std::size_t min_dim() const;
    const std::vector<Monomial>& terms() const { return terms_; }

private:
    std::vector<Monomial> terms_;
};

enum class ObservableKind {
    hamiltonian,
    potential_energy,
    kinetic_energy,
    first_coordinate,
    exp_bh,
    polynomial,
};

// Catalog observable. Names: hamiltonian, potential_energy, kinetic_energy,
// first_coordinate, exp_bh(<b>), poly(<polynomial>).
struct Observable {
    std::string name;
    ObservableKind kind = ObservableKind::polynomial;
    double b = 0.0;
    Polynomial poly;

    static Observable parse(std::string_view spec);
    static Observable constant(double c);
    static Observable of(ObservableKind kind);
    static Observable exp_bh(double b);
    static Observable polynomial(std::string_view text);

    double operator()(const Potential& potential, const State& s) const;
};

/// Splits a comma-separated catalog list; commas inside parentheses do not split.
std::vector<Observable> parse_observables(std::string_view list);

}  // namespace langevin
