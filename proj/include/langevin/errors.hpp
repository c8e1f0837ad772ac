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
#include <stdexcept>
#include <string>

namespace langevin {

// Bad arguments: dimension mismatch, out-of-range parameters, unsupported
// observable/reference combinations.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A position outside the finite-energy domain D was handed to an operation
// that needs U(x) < infinity.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Every chain of an unstopped ensemble left the domain.
class EscapedEnsemble : public std::runtime_error {
public:
    EscapedEnsemble(std::size_t escaped, std::size_t n_chains, double mean_escape_step)
        : std::runtime_error("all " + std::to_string(n_chains) + " chains escaped the domain"),
          escaped_(escaped), n_chains_(n_chains), mean_escape_step_(mean_escape_step) {}

    std::size_t escaped() const { return escaped_; }
    std::size_t n_chains() const { return n_chains_; }
    double mean_escape_step() const { return mean_escape_step_; }

private:
    std::size_t escaped_;
    std::size_t n_chains_;
    double mean_escape_step_;
};

// Too few grid points carry signal above their confidence interval.
class InsufficientSignal : public std::runtime_error {
public:
    InsufficientSignal(std::size_t points_used, std::size_t points_dropped)
        : std::runtime_error("order fit needs at least 3 points above noise, got " +
                             std::to_string(points_used)),
          points_used_(points_used), points_dropped_(points_dropped) {}

    std::size_t points_used() const { return points_used_; }
    std::size_t points_dropped() const { return points_dropped_; }

private:
    std::size_t points_used_;
    std::size_t points_dropped_;
};

// A NaN reached an aggregate.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration file problems (unknown key, malformed value, failed precondition).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace langevin
