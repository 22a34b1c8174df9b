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
 * Run configuration: schema, validation and model construction.
 *
 * Schema (every key optional unless marked *):
 *
 *     model:
 *       encoder_units*    width M0 of the encoder output
 *       middle*           classical | quantum
 *       classical_units   classical middle width (required for classical)
 *       qubits            register size (required for quantum)
 *       layout            comma separated layout tokens (required for quantum)
 *       selection         full | min (required for quantum)
 *     train:
 *       batch_size        16
 *       epochs            100
 *       learning_rate     0.0001
 *       train_size        9916
 *       val_size          2480
 *     data:
 *       images*           IDX images file, plain or gzip
 *       labels*           IDX labels file, plain or gzip
 *     run:
 *       base_seed         0
 *       bootstrap_count   48
 *       out_dir           results
 *     shotnoise:
 *       epsilon           0.1
 *       trials            100
 *       shots_multiplier  3
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qhybrid/hybrid_model.hpp"
#include "qhybrid/runner/document.hpp"

namespace qhybrid {

/// Input width of every model: a flattened 28 x 28 image.
inline constexpr std::size_t kInputWidth = 784;

enum class MiddleKind { Classical, Quantum };

struct ModelSpec {
    std::size_t encoder_units{0};
    MiddleKind middle{MiddleKind::Classical};
    std::size_t classical_units{2};
    std::size_t qubits{1};
    std::string layout;
    OutputMode selection{OutputMode::Full};
};

struct TrainSpec {
    std::size_t batch_size{16};
    std::size_t epochs{100};
    double learning_rate{1e-4};
    std::size_t train_size{9916};
    std::size_t val_size{2480};
};

struct DataSpec {
    std::filesystem::path images;
    std::filesystem::path labels;
};

struct RunSpec {
    std::uint64_t base_seed{0};
    std::size_t bootstrap_count{48};
    std::filesystem::path out_dir{"results"};
};

struct ShotNoiseSpec {
    double epsilon{0.1};
    std::size_t trials{100};
    double shots_multiplier{3.0};
};

struct RunConfig {
    ModelSpec model;
    TrainSpec train;
    DataSpec data;
    RunSpec run;
    ShotNoiseSpec shotnoise;

    /// K_tot of the architecture this config describes.
    [[nodiscard]] std::size_t parameter_count() const;

    /// Canonical document; parse_config(to_document().to_string()) yields
    /// an equal config.
    [[nodiscard]] Document to_document() const;
};

/**
 * Parses and validates a config document. Relative data paths are resolved
 * against `base_dir` when it is non-empty. Finishes with a single-sample
 * forward pass through a freshly built model, so a width mismatch between
 * stages is reported here.
 *
 * Throws ConfigError for unknown, missing or malformed keys (message names
 * "section.key") and DimensionError for stages that do not chain.
 */
[[nodiscard]] RunConfig parse_config(std::string_view text,
                                     const std::filesystem::path &base_dir = {});

/// Reads and parses a config file, resolving data paths next to it.
[[nodiscard]] RunConfig load_config(const std::filesystem::path &path);

/**
 * Builds the model:
 *  - classical: encoder 784->M0 (relu), middle M0->units (sigmoid),
 *    decoder units->2
 *  - quantum:   encoder 784->M0 (identity, squashed into angles), circuit,
 *    decoder Q1->2
 */
[[nodiscard]] MainModel build_model(const ModelSpec &spec, std::mt19937_64 &rng);

[[nodiscard]] CircuitLayout build_layout(const ModelSpec &spec);

} // namespace qhybrid
