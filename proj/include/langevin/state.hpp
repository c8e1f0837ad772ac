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
#include <utility>
#include <vector>

#include "langevin/errors.hpp"

namespace langevin {

/// Phase-space point z = (x, y) with position x and velocity y, both of length d.
struct State {
    std::vector<double> x;
    std::vector<double> y;

    State() = default;
    State(std::vector<double> pos, std::vector<double> vel) : x(std::move(pos)), y(std::move(vel)) {
        if (x.size() != y.size() || x.empty())
            throw InvalidInput("state needs position and velocity of equal length d >= 1");
    }

    /// State at rest at position x.
    static State at_rest(std::vector<double> pos) {
        std::vector<double> vel(pos.size(), 0.0);
        return State(std::move(pos), std::move(vel));
    }

    std::size_t dim() const { return x.size(); }

    bool operator==(const State&) const = default;
};

inline double kinetic_energy(const State& s) {
    double k = 0.0;
    for (double v : s.y) k += v * v;
    return 0.5 * k;
}

}  // namespace langevin
