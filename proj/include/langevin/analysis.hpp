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
#include <optional>
#include <string>
#include <vector>

#include "langevin/observable.hpp"
#include "langevin/potential.hpp"
#include "langevin/sampler.hpp"
#include "langevin/scheme.hpp"

namespace langevin {

/// Exact E[Z_t] of the Langevin SDE with grad U(x) = stiffness * x, i.e.
/// exp(tM) z0 per coordinate pair with M = [[0, 1], [-stiffness, -gamma]].
State analytic_mean_linear(const State& init, double t, double gamma, double stiffness);

enum class ReferenceKind { analytic_linear, fine_step };

struct ReferenceSolution {
    ReferenceKind kind = ReferenceKind::analytic_linear;
    double fine_delta = 0.0;  // fine_step only

    static ReferenceSolution analytic() { return {}; }
    static ReferenceSolution fine(double delta_ref) { return {ReferenceKind::fine_step, delta_ref}; }
};

/// Refinement factor between the smallest grid step and the fine reference.
inline constexpr double kFineRefinement = 16.0;

struct ErrorPoint {
    double delta = 0.0;
    std::size_t n_steps = 0;
    double estimate = 0.0;
    double estimate_ci = 0.0;
    double reference = 0.0;
    double reference_ci = 0.0;
    double error = 0.0;
    double ci95 = 0.0;
};

struct OrderFit {
    double order = 0.0;
    double c1 = 0.0;
    std::size_t points_used = 0;
    std::size_t points_dropped = 0;
};

struct RichardsonPoint {
    double delta = 0.0;  // coarse step of the pair (delta, delta/2)
    double combined = 0.0;
    double error = 0.0;
    double ci95 = 0.0;
};

struct ErrorReport {
    std::string quantity;
    std::vector<ErrorPoint> errors;
    std::optional<OrderFit> fit;
    std::size_t fit_points_used = 0;
    std::vector<RichardsonPoint> richardson;
    std::optional<OrderFit> richardson_fit;
    std::size_t richardson_points_used = 0;
};

/// Least-squares slope of log|error| against log(delta), using only points
/// with |error| > ci. C1 carries the sign of the error at the smallest delta.
/// Throws InsufficientSignal with fewer than three usable points.
OrderFit fit_order(const std::vector<double>& deltas, const std::vector<double>& errors,
                   const std::vector<double>& cis = {});

/// 2 A(delta/2) - A(delta): removes the first-order term.
double richardson(double estimate_at_delta, double estimate_at_half_delta);

/// Weak error E f(Z_n) - E f(Z_t) on each grid step, n = t / delta. Grid level
/// k draws from substream k of spec.master_seed; a fine-step reference uses
/// substream grid.size(). Also fills Richardson pairs and both order fits
/// (left empty when the signal is insufficient).
ErrorReport weak_error_curve(const Observable& f, double t, const std::vector<double>& delta_grid,
                             const RunSpec& spec, const Potential& potential,
                             const SchemeParams& base, const ReferenceSolution& reference);

/// mu_delta(f) - mu(f) on each grid step from long-run time averages
/// (spec.n_chains independent chains of spec.n_steps steps per level).
/// A Monte Carlo reference passes its own half-width in `mu_reference_ci`.
ErrorReport invariant_bias_curve(const Observable& f, const std::vector<double>& delta_grid,
                                 const RunSpec& spec, const Potential& potential,
                                 const SchemeParams& base, double mu_reference,
                                 double mu_reference_ci = 0.0);

/// Exact Gibbs expectation mu(f) for a quadratic potential, when f is in the
/// catalog (polynomials by Gaussian moments, energies, exp_bh). Empty otherwise.
std::optional<double> gibbs_mean_quadratic(const Observable& f, const Potential& potential,
                                           double beta);

/// Independent exact draws from the Gibbs measure of a quadratic potential.
std::vector<State> gibbs_samples_quadratic(const Potential& potential, double beta, std::size_t n,
                                           std::uint64_t seed);

/// Lf = y.grad_x f - grad U.grad_y f - gamma y.grad_y f + gamma/beta lap_y f
/// for polynomial observables. Throws InvalidInput for other observables.
double apply_generator(const Observable& f, const State& state, const Potential& potential,
                       const SchemeParams& params);

struct GeneratorCheckReport {
    std::string observable;
    double estimate = 0.0;
    double ci95 = 0.0;
    bool pass = false;  // |estimate| <= 3 ci95
};

GeneratorCheckReport stationarity_check(const Observable& f, const std::vector<State>& gibbs_samples,
                                        const Potential& potential, const SchemeParams& params);

}  // namespace langevin
