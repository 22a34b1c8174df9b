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
#include "qhybrid/runner/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

std::vector<double> sorted(std::span<const double> values) {
    if (values.empty()) {
        throw ArgumentError("statistic of an empty sample");
    }
    std::vector<double> out(values.begin(), values.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

void AccuracyHistogram::add(double accuracy) {
    if (accuracy < kLower) {
        ++underflow;
        return;
    }
    // The slack absorbs representation error at bin edges such as 0.902.
    const double position = (accuracy - kLower) / kBinWidth + 1e-9;
    const auto bin = static_cast<std::size_t>(std::floor(position));
    ++counts[std::min(bin, kBins - 1)];
}

std::size_t AccuracyHistogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), underflow);
}

double AccuracyHistogram::edge(std::size_t i) noexcept {
    // Integer thousandths keep edges at their nearest decimal.
    return static_cast<double>(900 + 2 * i) / 1000.0;
}

double median(std::span<const double> values) {
    const auto s = sorted(values);
    const std::size_t n = s.size();
    return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

double nearest_rank_percentile(std::span<const double> values, double percent) {
    const auto s = sorted(values);
    const double n = static_cast<double>(s.size());
    // Rank ceil(p n / 100); the epsilon keeps exact products such as
    // 0.9 * 10 from rounding up to the next rank.
    const double raw = percent / 100.0 * n;
    auto rank = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, s.size());
    return s[rank - 1];
}

BootstrapSummary summarize(std::span<const AccuracyPair> finals, std::size_t failed) {
    if (finals.empty()) {
        throw ArgumentError("cannot summarise an empty set of runs");
    }
    std::vector<double> train;
    std::vector<double> validation;
    for (const auto &f : finals) {
        train.push_back(f.train);
        validation.push_back(f.validation);
    }
    BootstrapSummary out;
    out.runs = finals.size();
    out.failed = failed;
    out.median_validation = median(validation);
    out.ci68_low = nearest_rank_percentile(validation, 16.0);
    out.ci68_high = nearest_rank_percentile(validation, 84.0);
    out.ci_degenerate = finals.size() < 2;
    out.median_train = median(train);
    out.tr90 = nearest_rank_percentile(train, 90.0);
    out.vr90 = nearest_rank_percentile(validation, 90.0);
    for (double v : validation) {
        out.histogram.add(v);
    }
    return out;
}

} // namespace qhybrid
