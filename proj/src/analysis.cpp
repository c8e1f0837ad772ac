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

#include "langevin/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "langevin/rng.hpp"
#include "langevin/stats.hpp"

namespace langevin {

namespace {

std::size_t steps_for(double t, double delta) {
    const double ratio = t / delta;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * delta - t) > 1e-9 * t)
        throw InvalidInput("t / delta must be a positive integer (delta = " + std::to_string(delta) + ")");
    return static_cast<std::size_t>(n);
}

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidInput("empty delta grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw InvalidInput("delta grid entries must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1])) throw InvalidInput("delta grid must be strictly decreasing");
    }
}

// Index of delta/2 in the grid, or grid.size().
std::size_t half_index(const std::vector<double>& grid, std::size_t i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j)
        if (std::abs(grid[j] - 0.5 * grid[i]) <= 1e-12 * grid[i]) return j;
    return grid.size();
}

void fill_fits(ErrorReport& report) {
    std::vector<double> d, e, c;
    for (const auto& p : report.errors) {
        d.push_back(p.delta);
        e.push_back(p.error);
        c.push_back(p.ci95);
    }
    try {
        report.fit = fit_order(d, e, c);
        report.fit_points_used = report.fit->points_used;
    } catch (const InsufficientSignal& s) {
        report.fit_points_used = s.points_used();
    }

    d.clear();
    e.clear();
    c.clear();
    for (const auto& r : report.richardson) {
        d.push_back(r.delta);
        e.push_back(r.error);
        c.push_back(r.ci95);
    }
    try {
        report.richardson_fit = fit_order(d, e, c);
        report.richardson_points_used = report.richardson_fit->points_used;
    } catch (const InsufficientSignal& s) {
        report.richardson_points_used = s.points_used();
    }
}

void fill_richardson(ErrorReport& report, const std::vector<double>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t j = half_index(grid, i);
        if (j == grid.size()) continue;
        const ErrorPoint& coarse = report.errors[i];
        const ErrorPoint& fine = report.errors[j];
        RichardsonPoint r;
        r.delta = grid[i];
        r.combined = richardson(coarse.estimate, fine.estimate);
        r.error = r.combined - coarse.reference;
        const double est_ci2 =
            4.0 * fine.estimate_ci * fine.estimate_ci + coarse.estimate_ci * coarse.estimate_ci;
        r.ci95 = std::sqrt(est_ci2 + coarse.reference_ci * coarse.reference_ci);
        report.richardson.push_back(r);
    }
}

double gaussian_moment(unsigned p, double variance) {
    if (p % 2 == 1) return 0.0;
    double m = 1.0;
    for (unsigned k = p - 1; k >= 1 && k < p; k -= 2) m *= static_cast<double>(k);
    return m * std::pow(variance, 0.5 * p);
}

}  // namespace

State analytic_mean_linear(const State& init, double t, double gamma, double stiffness) {
    if (!(t >= 0.0)) throw InvalidInput("time must be non-negative");
    // M = a I + N with a = -gamma/2, N = [[gamma/2, 1], [-k, -gamma/2]], N^2 = q I.
    const double a = -0.5 * gamma;
    const double q = 0.25 * gamma * gamma - stiffness;
    double c = 1.0, s = t;
    if (q > 0.0) {
        const double w = std::sqrt(q);
        c = std::cosh(w * t);
        s = std::sinh(w * t) / w;
    } else if (q < 0.0) {
        const double w = std::sqrt(-q);
        c = std::cos(w * t);
        s = std::sin(w * t) / w;
    }
    const double e = std::exp(a * t);
    State out = init;
    for (std::size_t i = 0; i < init.dim(); ++i) {
        const double x = init.x[i], y = init.y[i];
        out.x[i] = e * (c * x + s * (0.5 * gamma * x + y));
        out.y[i] = e * (c * y + s * (-stiffness * x - 0.5 * gamma * y));
    }
    return out;
}

OrderFit fit_order(const std::vector<double>& deltas, const std::vector<double>& errors,
                   const std::vector<double>& cis) {
    if (deltas.size() != errors.size() || (!cis.empty() && cis.size() != errors.size()))
        throw InvalidInput("fit_order inputs have mismatched lengths");
    std::vector<double> lx, ly;
    double smallest = 0.0, sign = 1.0;
    bool have = false;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double ci = cis.empty() ? 0.0 : cis[i];
        if (!(std::abs(errors[i]) > ci) || !(deltas[i] > 0.0)) continue;
        lx.push_back(std::log(deltas[i]));
        ly.push_back(std::log(std::abs(errors[i])));
        if (!have || deltas[i] < smallest) {
            smallest = deltas[i];
            sign = errors[i] < 0.0 ? -1.0 : 1.0;
            have = true;
        }
    }
    const std::size_t dropped = deltas.size() - lx.size();
    if (lx.size() < 3) throw InsufficientSignal(lx.size(), dropped);
    const LineFit line = fit_line(lx, ly);
    return {line.slope, sign * std::exp(line.intercept), lx.size(), dropped};
}

double richardson(double estimate_at_delta, double estimate_at_half_delta) {
    return 2.0 * estimate_at_half_delta - estimate_at_delta;
}

ErrorReport weak_error_curve(const Observable& f, double t, const std::vector<double>& delta_grid,
                             const RunSpec& spec, const Potential& potential,
                             const SchemeParams& base, const ReferenceSolution& reference) {
    check_grid(delta_grid);
    if (!(t > 0.0)) throw InvalidInput("weak-error horizon t must be positive");
    std::vector<std::size_t> steps;
    for (double d : delta_grid) steps.push_back(steps_for(t, d));

    double ref = 0.0, ref_ci = 0.0;
    if (reference.kind == ReferenceKind::analytic_linear) {
        if (!potential.is_quadratic())
            throw InvalidInput("analytic-linear reference needs a quadratic potential");
        if (!f.poly.terms().empty() && !f.poly.is_affine())
            throw InvalidInput("analytic-linear reference only covers affine observables");
        if (f.kind != ObservableKind::polynomial && f.kind != ObservableKind::first_coordinate)
            throw InvalidInput("analytic-linear reference only covers affine observables");
        const State mean = analytic_mean_linear(spec.init.center, t, base.gamma,
                                                potential.params().confinement_stiffness);
        ref = f.poly.evaluate(mean);
    } else {
        const double min_delta = delta_grid.back();
        if (!(reference.fine_delta > 0.0) ||
            reference.fine_delta > min_delta / kFineRefinement * (1.0 + 1e-12))
            throw InvalidInput("fine-step reference needs delta_ref <= min(delta_grid) / 16");
        RunSpec fine = spec;
        fine.n_steps = steps_for(t, reference.fine_delta);
        fine.burn_in = 0;
        fine.level = static_cast<std::uint32_t>(delta_grid.size());
        SchemeParams p = base;
        p.delta = reference.fine_delta;
        const auto res = run_ensemble(fine, potential, p, {f});
        ref = res.observables[0].mean;
        ref_ci = res.observables[0].ci95;
    }

    ErrorReport report;
    report.quantity = f.name;
    for (std::size_t k = 0; k < delta_grid.size(); ++k) {
        RunSpec level = spec;
        level.n_steps = steps[k];
        level.burn_in = 0;
        level.level = static_cast<std::uint32_t>(k);
        SchemeParams p = base;
        p.delta = delta_grid[k];
        const auto res = run_ensemble(level, potential, p, {f});
        ErrorPoint e;
        e.delta = delta_grid[k];
        e.n_steps = steps[k];
        e.estimate = res.observables[0].mean;
        e.estimate_ci = res.observables[0].ci95;
        e.reference = ref;
        e.reference_ci = ref_ci;
        e.error = e.estimate - ref;
        e.ci95 = std::sqrt(e.estimate_ci * e.estimate_ci + ref_ci * ref_ci);
        report.errors.push_back(e);
    }
    fill_richardson(report, delta_grid);
    fill_fits(report);
    return report;
}

ErrorReport invariant_bias_curve(const Observable& f, const std::vector<double>& delta_grid,
                                 const RunSpec& spec, const Potential& potential,
                                 const SchemeParams& base, double mu_reference,
                                 double mu_reference_ci) {
    check_grid(delta_grid);
    ErrorReport report;
    report.quantity = f.name;
    for (std::size_t k = 0; k < delta_grid.size(); ++k) {
        RunSpec level = spec;
        level.level = static_cast<std::uint32_t>(k);
        SchemeParams p = base;
        p.delta = delta_grid[k];
        const TimeAverage avg = ergodic_average_ensemble(level, potential, p, f);
        ErrorPoint e;
        e.delta = delta_grid[k];
        e.n_steps = spec.n_steps;
        e.estimate = avg.mean;
        e.estimate_ci = avg.ci_halfwidth;
        e.reference = mu_reference;
        e.reference_ci = mu_reference_ci;
        e.error = avg.mean - mu_reference;
        e.ci95 = std::sqrt(avg.ci_halfwidth * avg.ci_halfwidth + mu_reference_ci * mu_reference_ci);
        report.errors.push_back(e);
    }
    fill_richardson(report, delta_grid);
    fill_fits(report);
    return report;
}

std::optional<double> gibbs_mean_quadratic(const Observable& f, const Potential& potential,
                                           double beta) {
    if (!potential.is_quadratic() || !(beta > 0.0)) return std::nullopt;
    const double d = static_cast<double>(potential.dim());
    const double var_x = 1.0 / (beta * potential.params().confinement_stiffness);
    const double var_y = 1.0 / beta;
    switch (f.kind) {
        case ObservableKind::hamiltonian: return d / beta;
        case ObservableKind::potential_energy:
        case ObservableKind::kinetic_energy: return 0.5 * d / beta;
        case ObservableKind::exp_bh:
            if (!(f.b < beta)) return std::nullopt;
            return std::pow(beta / (beta - f.b), d);
        case ObservableKind::first_coordinate:
        case ObservableKind::polynomial: {
            if (f.poly.min_dim() > potential.dim()) return std::nullopt;
            double total = 0.0;
            for (const auto& m : f.poly.terms()) {
                double v = m.coefficient;
                for (const auto& [var, p] : m.factors)
                    v *= gaussian_moment(p, var.velocity ? var_y : var_x);
                total += v;
            }
            return total;
        }
    }
    return std::nullopt;
}

std::vector<State> gibbs_samples_quadratic(const Potential& potential, double beta, std::size_t n,
                                           std::uint64_t seed) {
    if (!potential.is_quadratic()) throw InvalidInput("exact Gibbs sampling needs a quadratic potential");
    if (!(beta > 0.0)) throw InvalidInput("beta must be positive");
    const std::size_t d = potential.dim();
    const double sx = 1.0 / std::sqrt(beta * potential.params().confinement_stiffness);
    const double sy = 1.0 / std::sqrt(beta);
    NormalStream stream = derive_stream(seed, 0);
    std::vector<State> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        State s{std::vector<double>(d), std::vector<double>(d)};
        for (std::size_t i = 0; i < d; ++i) s.x[i] = sx * stream.normal();
        for (std::size_t i = 0; i < d; ++i) s.y[i] = sy * stream.normal();
        out.push_back(std::move(s));
    }
    return out;
}

double apply_generator(const Observable& f, const State& state, const Potential& potential,
                       const SchemeParams& params) {
    if (f.kind != ObservableKind::polynomial && f.kind != ObservableKind::first_coordinate)
        throw InvalidInput("observable '" + f.name + "' has no registered derivatives");
    const std::size_t d = state.dim();
    if (f.poly.min_dim() > d) throw InvalidInput("observable uses a coordinate beyond the state");
    if (f.poly.is_constant()) return 0.0;
    const auto grad = potential.gradient(state.x);
    double lf = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const Variable xi{false, i}, yi{true, i};
        const Polynomial dy = f.poly.derivative(yi);
        const double dfdy = dy.evaluate(state);
        lf += state.y[i] * f.poly.derivative(xi).evaluate(state);
        lf -= (grad[i] + params.gamma * state.y[i]) * dfdy;
        lf += params.gamma / params.beta * dy.derivative(yi).evaluate(state);
    }
    return lf;
}

GeneratorCheckReport stationarity_check(const Observable& f, const std::vector<State>& gibbs_samples,
                                        const Potential& potential, const SchemeParams& params) {
    if (gibbs_samples.empty()) throw InvalidInput("stationarity check needs samples");
    RunningStats acc;
    for (const auto& s : gibbs_samples) acc.push(apply_generator(f, s, potential, params));
    GeneratorCheckReport r{f.name, acc.mean(), acc.ci95(), false};
    if (std::isnan(r.estimate) || std::isnan(r.ci95)) throw NumericalFailure("NaN in generator check");
    r.pass = std::abs(r.estimate) <= 3.0 * r.ci95;
    return r;
}

}  // namespace langevin
