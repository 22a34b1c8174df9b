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
 * Empirical check of the shot-count bound for the Hadamard-test gradient.
 *
 * The single-shot variance of every gradient component is estimated by
 * drawing one-shot estimates, the bound Q1 M max V / eps^2 is evaluated
 * with it, and the estimator is then run at multiplier x bound shots over
 * a fixed seed set. A trial succeeds when |g - g~|_2 <= eps.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "qhybrid/quantum_model.hpp"

namespace qhybrid {

struct ShotNoiseOptions {
    double epsilon{0.1};
    std::size_t trials{100};
    std::uint64_t base_seed{0};   ///< trial t uses base_seed + t
    double shots_multiplier{3.0};
    std::size_t variance_draws{20000};
    std::optional<std::uint64_t> shots; ///< replaces multiplier x bound
};

struct ShotNoiseReport {
    std::size_t num_qubits{0};
    std::size_t num_params{0};
    std::size_t num_outputs{0};
    double epsilon{0.0};
    GradientMatrix exact{0, 0};
    GradientMatrix variances{0, 0};          ///< empirical single-shot
    GradientMatrix analytic_variances{0, 0}; ///< 4[(1 - r^2 r~^2) + (1 - i^2 i~^2)]
    double max_variance{0.0};
    std::uint64_t bound{0};
    std::uint64_t shots{0};
    std::size_t trials{0};
    std::size_t successes{0};
    double mean_squared_error{0.0}; ///< mean of |g - g~|_2^2 over trials

    [[nodiscard]] double success_fraction() const noexcept {
        return trials == 0 ? 0.0
                           : static_cast<double>(successes) / static_cast<double>(trials);
    }

    /// Key-value document in the same format as the config files.
    [[nodiscard]] std::string to_text() const;
};

/// Throws ArgumentError for a non-positive epsilon or zero trials.
[[nodiscard]] ShotNoiseReport shot_noise_experiment(const CircuitLayout &layout,
                                                    std::span<const double> angles,
                                                    OutputSelection selection,
                                                    const ShotNoiseOptions &options);

/// Writes report.to_text() to `path`, creating parent directories.
void write_shot_noise_report(const ShotNoiseReport &report,
                             const std::filesystem::path &path);

} // namespace qhybrid
