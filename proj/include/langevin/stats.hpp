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

#include <cmath>
#include <cstddef>
#include <span>

namespace langevin {

inline constexpr double kZ95 = 1.959963984540054;

// Welford accumulator. Feeding a constant c gives mean exactly c and
// variance exactly 0.
class RunningStats {
public:
    void push(double v) {
        ++n_;
        const double delta = v - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (v - mean_);
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance (0 for fewer than two samples).
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    /// 95% normal-approximation half-width of the mean.
    double ci95() const {
        return n_ > 1 ? kZ95 * std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct BatchMeans {
    double mean;
    double ci_halfwidth;
    double n_effective;
    std::size_t n_batches;
};

// Streaming batch means for a series of known length n: floor(sqrt(n))
// batches of n / floor(sqrt(n)) samples. Samples past the last full batch
// count toward the mean only.
class BatchMeansAccumulator {
public:
    explicit BatchMeansAccumulator(std::size_t total);
    void push(double v);
    BatchMeans result() const;

private:
    std::size_t total_;
    std::size_t n_batches_;
    std::size_t batch_size_;
    std::size_t seen_ = 0;
    RunningStats all_;
    RunningStats current_;
    RunningStats between_;
};

/// Time-average with a batch-means 95% interval.
BatchMeans batch_means(std::span<const double> series);

struct LineFit {
    double slope;
    double intercept;
    double slope_stderr;  // 0 for exactly two points
};

/// Ordinary least squares y = intercept + slope x. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace langevin
