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
#include "qhybrid/runner/shot_noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "qhybrid/errors.hpp"
#include "qhybrid/runner/document.hpp"

namespace qhybrid {
namespace {

std::string join(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i == 0 ? "" : ", ") + format_double(values[i]);
    }
    return out;
}

GradientMatrix analytic_variance(const HadamardEstimates &e) {
    GradientMatrix v(e.rows, e.cols);
    for (std::size_t k = 0; k < e.rows; ++k) {
        for (std::size_t m = 0; m < e.cols; ++m) {
            const std::size_t idx = k * e.cols + m;
            const double rr = e.r[k] * e.r_shift[idx];
            const double ii = e.i[k] * e.i_shift[idx];
            v(k, m) = 4.0 * ((1.0 - rr * rr) + (1.0 - ii * ii));
        }
    }
    return v;
}

GradientMatrix empirical_variance(const HadamardEstimates &exact, std::size_t draws,
                                  std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
    std::mt19937_64 rng(seq);
    GradientMatrix mean(exact.rows, exact.cols);
    GradientMatrix m2(exact.rows, exact.cols);
    for (std::size_t d = 1; d <= draws; ++d) {
        const GradientMatrix g = combine_overlaps(sample_overlaps(exact, 1, rng));
        for (std::size_t k = 0; k < g.rows(); ++k) {
            for (std::size_t m = 0; m < g.cols(); ++m) {
                const double delta = g(k, m) - mean(k, m);
                mean(k, m) += delta / static_cast<double>(d);
                m2(k, m) += delta * (g(k, m) - mean(k, m));
            }
        }
    }
    GradientMatrix var(exact.rows, exact.cols);
    for (std::size_t k = 0; k < var.rows(); ++k) {
        for (std::size_t m = 0; m < var.cols(); ++m) {
            var(k, m) = m2(k, m) / static_cast<double>(draws - 1);
        }
    }
    return var;
}

} // namespace

std::string ShotNoiseReport::to_text() const {
    Document doc;
    doc.set("circuit", "qubits", std::to_string(num_qubits));
    doc.set("circuit", "params", std::to_string(num_params));
    doc.set("circuit", "outputs", std::to_string(num_outputs));
    doc.set("bound", "epsilon", format_double(epsilon));
    doc.set("bound", "max_variance", format_double(max_variance));
    doc.set("bound", "sample_bound", std::to_string(bound));
    doc.set("bound", "shots", std::to_string(shots));
    doc.set("result", "trials", std::to_string(trials));
    doc.set("result", "successes", std::to_string(successes));
    doc.set("result", "success_fraction", format_double(success_fraction()));
    doc.set("result", "mean_squared_error", format_double(mean_squared_error));
    doc.set("gradient", "exact", join(exact.data()));
    doc.set("gradient", "empirical_variance", join(variances.data()));
    doc.set("gradient", "analytic_variance", join(analytic_variances.data()));
    return doc.to_string();
}

ShotNoiseReport shot_noise_experiment(const CircuitLayout &layout,
                                      std::span<const double> angles,
                                      OutputSelection selection,
                                      const ShotNoiseOptions &options) {
    if (!(options.epsilon > 0.0)) {
        throw ArgumentError("epsilon must be positive");
    }
    if (options.trials == 0) {
        throw ArgumentError("shot-noise experiment needs at least one trial");
    }
    if (options.variance_draws < 2) {
        throw ArgumentError("variance estimate needs at least two draws");
    }
    const HadamardEstimates exact = exact_overlaps(layout, angles, selection);

    ShotNoiseReport report;
    report.num_qubits = layout.num_qubits();
    report.num_params = layout.num_params();
    report.num_outputs = exact.rows;
    report.epsilon = options.epsilon;
    report.exact = combine_overlaps(exact);
    report.analytic_variances = analytic_variance(exact);
    report.variances = empirical_variance(exact, options.variance_draws, options.base_seed);
    const auto v = report.variances.data();
    report.max_variance = *std::max_element(v.begin(), v.end());
    report.bound = sample_bound(ComplexityQuery{report.num_outputs, report.num_params,
                                                options.epsilon, report.max_variance});
    report.shots = options.shots.value_or(static_cast<std::uint64_t>(
        std::ceil(options.shots_multiplier * static_cast<double>(report.bound))));
    report.shots = std::max<std::uint64_t>(report.shots, 1);

    const double eps2 = options.epsilon * options.epsilon;
    double sq_sum = 0.0;
    for (std::size_t t = 0; t < options.trials; ++t) {
        std::mt19937_64 rng(options.base_seed + t);
        const GradientMatrix g = combine_overlaps(sample_overlaps(exact, report.shots, rng));
        double sq = 0.0;
        for (std::size_t idx = 0; idx < g.data().size(); ++idx) {
            const double d = g.data()[idx] - report.exact.data()[idx];
            sq += d * d;
        }
        sq_sum += sq;
        report.successes += sq <= eps2 ? 1 : 0;
    }
    report.trials = options.trials;
    report.mean_squared_error = sq_sum / static_cast<double>(options.trials);
    return report;
}

void write_shot_noise_report(const ShotNoiseReport &report,
                             const std::filesystem::path &path) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create '" + path.parent_path().string() +
                          "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    out << report.to_text();
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

} // namespace qhybrid
