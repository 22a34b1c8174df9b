// Copyright 2026 The qhybrid Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Bootstrap aggregation. Medians use the midpoint convention, percentiles
 * use nearest rank (the smallest value with at least p% of the sample at
 * or below it), and the 68% interval spans the 16th and 84th percentiles.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qhybrid {

/// Fixed 0.002-wide bins over [0.9, 1.0]; 1.0 lands in the last bin and
/// anything below 0.9 in `underflow`.
struct AccuracyHistogram {
    static constexpr double kLower = 0.9;
    static constexpr double kUpper = 1.0;
    static constexpr double kBinWidth = 0.002;
    static constexpr std::size_t kBins = 50;

    std::size_t underflow{0};
    std::vector<std::size_t> counts = std::vector<std::size_t>(kBins, 0);

    void add(double accuracy);
    [[nodiscard]] std::size_t total() const noexcept;
    [[nodiscard]] static double edge(std::size_t i) noexcept;

    bool operator==(const AccuracyHistogram &) const = default;
};

struct AccuracyPair {
    double train{0.0};
    double validation{0.0};
};

struct BootstrapSummary {
    std::size_t runs{0};   ///< successful runs aggregated
    std::size_t failed{0}; ///< runs excluded because they aborted
    double median_validation{0.0};
    double ci68_low{0.0};
    double ci68_high{0.0};
    bool ci_degenerate{false}; ///< fewer than two runs
    double median_train{0.0};
    double tr90{0.0};
    double vr90{0.0};
    AccuracyHistogram histogram; ///< validation accuracies

    bool operator==(const BootstrapSummary &) const = default;
};

/// Throws ArgumentError on an empty sample.
[[nodiscard]] double median(std::span<const double> values);
[[nodiscard]] double nearest_rank_percentile(std::span<const double> values,
                                             double percent);

/// Aggregates final accuracies of the successful runs. Throws ArgumentError
/// when `finals` is empty.
[[nodiscard]] BootstrapSummary summarize(std::span<const AccuracyPair> finals,
                                         std::size_t failed = 0);

} // namespace qhybrid
