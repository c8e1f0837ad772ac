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

#include "langevin/stats.hpp"

#include <algorithm>

#include "langevin/errors.hpp"

namespace langevin {

BatchMeansAccumulator::BatchMeansAccumulator(std::size_t total)
    : total_(total),
      n_batches_(static_cast<std::size_t>(std::sqrt(static_cast<double>(total)))),
      batch_size_(n_batches_ > 0 ? total / n_batches_ : 0) {
    if (total == 0) throw InvalidInput("batch means of an empty series");
}

void BatchMeansAccumulator::push(double v) {
    if (seen_ >= total_) throw InvalidInput("batch means received more samples than declared");
    all_.push(v);
    if (seen_ < n_batches_ * batch_size_) {
        current_.push(v);
        if (current_.count() == batch_size_) {
            between_.push(current_.mean());
            current_ = RunningStats{};
        }
    }
    ++seen_;
}

BatchMeans BatchMeansAccumulator::result() const {
    if (seen_ != total_) throw InvalidInput("batch means finalised before the series ended");
    const double n = static_cast<double>(total_);
    if (n_batches_ < 2) return {all_.mean(), 0.0, n, n_batches_};
    const double var_b = between_.variance();
    const double ci = kZ95 * std::sqrt(var_b / static_cast<double>(n_batches_));
    // ESS from the ratio of the naive to the batch-based variance of the mean.
    double ess = n;
    if (var_b > 0.0) ess = std::min(n, n * all_.variance() / (static_cast<double>(batch_size_) * var_b));
    return {all_.mean(), ci, ess, n_batches_};
}

BatchMeans batch_means(std::span<const double> series) {
    BatchMeansAccumulator acc(series.size());
    for (double v : series) acc.push(v);
    return acc.result();
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw InvalidInput("line fit needs >= 2 paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidInput("line fit needs distinct abscissae");
    LineFit fit{sxy / sxx, 0.0, 0.0};
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

}  // namespace langevin
