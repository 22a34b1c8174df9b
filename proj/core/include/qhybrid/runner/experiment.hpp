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
 * Training runs and seeded bootstrap ensembles.
 *
 * Run k of a bootstrap uses seed base_seed + k and nothing else, so every
 * run is reproducible on its own. Within a run the seed drives three
 * independent streams: parameter initialisation, the train/validation
 * split and the per-epoch batch order.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qhybrid/mnist_data.hpp"
#include "qhybrid/runner/config.hpp"
#include "qhybrid/runner/statistics.hpp"

namespace qhybrid {

struct EpochMetrics {
    std::size_t epoch{0}; ///< 1-based
    double train_loss{0.0};
    double train_accuracy{0.0};
    double val_accuracy{0.0};

    bool operator==(const EpochMetrics &) const = default;
};

struct RunRecord {
    std::size_t index{0};
    std::uint64_t seed{0};
    bool ok{true};
    std::string error; ///< diagnostic when !ok
    std::vector<EpochMetrics> epochs;
    double final_train_accuracy{0.0};
    double final_val_accuracy{0.0};
    std::size_t parameter_count{0};
    double wall_seconds{0.0}; ///< not persisted with the deterministic files

    /// Equality over everything except wall-clock time.
    [[nodiscard]] bool same_result(const RunRecord &other) const;
};

/// Streams derived from one run seed.
struct RunSeeds {
    std::uint64_t init;
    std::uint64_t split;
    std::uint64_t shuffle;

    static RunSeeds derive(std::uint64_t run_seed);
};

/// Loads the IDX files named by the config and keeps the 3s and 7s.
[[nodiscard]] BinaryDataset load_binary_dataset(const RunConfig &config);

using ProgressFn = std::function<void(const RunRecord &, const EpochMetrics &)>;

/// Split, then `epochs` passes of train_step over shuffled batches with a
/// full evaluation of both sets after every epoch. Throws TrainingError on
/// a non-finite loss.
[[nodiscard]] RunRecord run_training(const RunConfig &config, const BinaryDataset &data,
                                     std::uint64_t seed, const ProgressFn &progress = {});

/// Convenience overload that loads the data first.
[[nodiscard]] RunRecord run_training(const RunConfig &config, std::uint64_t seed);

struct BootstrapResult {
    std::vector<RunRecord> records;
    BootstrapSummary summary;
};

/**
 * bootstrap_count runs with seeds base_seed, base_seed + 1, ... . A run
 * that throws is kept as a failed record and excluded from the summary.
 * `workers` > 1 trains runs concurrently; results do not depend on it.
 * Throws TrainingError if every run failed.
 */
[[nodiscard]] BootstrapResult run_bootstrap(const RunConfig &config,
                                            const BinaryDataset &data,
                                            std::size_t workers = 1,
                                            const ProgressFn &progress = {});

/// Summary over the successful records.
[[nodiscard]] BootstrapSummary summarize_records(const std::vector<RunRecord> &records);

} // namespace qhybrid
