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
 * IDX ingestion, 3-vs-7 filtering, seeded splitting and mini-batching.
 *
 * Pixels stay as bytes in memory and are scaled by 1/255 when a batch is
 * gathered, so a full training set costs 784 bytes per sample.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "qhybrid/classical_net.hpp"

namespace qhybrid {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

struct RawDataset {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<std::uint8_t> pixels; ///< count x rows x cols
    std::vector<std::uint8_t> labels; ///< digits 0-9

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t pixels_per_image() const noexcept { return rows * cols; }
    /// Pixel values in [0, 1].
    [[nodiscard]] std::vector<double> image(std::size_t index) const;
};

/// Samples of the two retained digits; label 0 for the lower digit (3) and
/// 1 for the higher one (7).
struct BinaryDataset {
    std::size_t pixels_per_image{0};
    std::vector<std::uint8_t> pixels;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::vector<double> image(std::size_t index) const;

    /// Scaled pixels of the chosen samples, one row per index.
    [[nodiscard]] Matrix gather(std::span<const std::size_t> indices) const;
    [[nodiscard]] std::vector<int> gather_labels(std::span<const std::size_t> indices) const;

    /// Samples at `indices`, in that order.
    [[nodiscard]] BinaryDataset subset(std::span<const std::size_t> indices) const;
};

/// Parses in-memory IDX payloads. Throws DataError with distinct messages
/// for a wrong magic number, a truncated payload and mismatched counts.
[[nodiscard]] RawDataset parse_idx(std::span<const std::uint8_t> images,
                                   std::span<const std::uint8_t> labels);

/// Reads both files (plain or gzip-compressed) and parses them.
[[nodiscard]] RawDataset load_idx(const std::filesystem::path &images_path,
                                  const std::filesystem::path &labels_path);

/// Whole file contents, transparently gunzipped.
[[nodiscard]] std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path);

[[nodiscard]] BinaryDataset filter_digits(const RawDataset &raw, int negative_digit = 3,
                                          int positive_digit = 7);

struct SplitDataset {
    BinaryDataset train;
    BinaryDataset validation;
    std::vector<std::size_t> train_indices; ///< positions in the source
    std::vector<std::size_t> validation_indices;
};

/// Seeded uniform permutation; the first `train_size` entries train, the
/// next `val_size` validate. Throws ArgumentError if the sizes exceed the data.
[[nodiscard]] SplitDataset split(const BinaryDataset &data, std::size_t train_size,
                                 std::size_t val_size, std::uint64_t seed);

/// Per-epoch shuffled index batches of `batch_size`, the last one partial.
[[nodiscard]] std::vector<std::vector<std::size_t>>
batches(std::size_t dataset_size, std::size_t batch_size, std::uint64_t shuffle_seed,
        std::uint64_t epoch);

/// Serialises IDX payloads, used to build fixtures.
[[nodiscard]] std::vector<std::uint8_t> encode_idx_images(std::size_t rows,
                                                          std::size_t cols,
                                                          std::span<const std::uint8_t> pixels);
[[nodiscard]] std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

} // namespace qhybrid
