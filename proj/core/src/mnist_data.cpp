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
#include "qhybrid/mnist_data.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include <zlib.h>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

constexpr double kPixelScale = 1.0 / 255.0;

std::string hex32(std::uint32_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "0x";
    for (int shift = 28; shift >= 0; shift -= 4) {
        out.push_back(digits[(v >> shift) & 0xF]);
    }
    return out;
}

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset,
                        const char *what) {
    if (bytes.size() < offset + 4) {
        throw DataError(std::string{"truncated IDX "} + what + ": header needs " +
                        std::to_string(offset + 4) + " bytes, file has " +
                        std::to_string(bytes.size()));
    }
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void append_be32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<double> scaled(std::span<const std::uint8_t> bytes) {
    std::vector<double> out(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out[i] = static_cast<double>(bytes[i]) * kPixelScale;
    }
    return out;
}

} // namespace

std::vector<double> RawDataset::image(std::size_t index) const {
    if (index >= size()) {
        throw IndexError("image index " + std::to_string(index) + " out of range");
    }
    const std::size_t n = pixels_per_image();
    return scaled(std::span<const std::uint8_t>(pixels).subspan(index * n, n));
}

std::vector<double> BinaryDataset::image(std::size_t index) const {
    if (index >= size()) {
        throw IndexError("image index " + std::to_string(index) + " out of range");
    }
    return scaled(std::span<const std::uint8_t>(pixels).subspan(
        index * pixels_per_image, pixels_per_image));
}

Matrix BinaryDataset::gather(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), pixels_per_image);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const std::size_t idx = indices[r];
        if (idx >= size()) {
            throw IndexError("sample index " + std::to_string(idx) + " out of range");
        }
        const std::uint8_t *src = pixels.data() + idx * pixels_per_image;
        auto dst = out.row(r);
        for (std::size_t p = 0; p < pixels_per_image; ++p) {
            dst[p] = static_cast<double>(src[p]) * kPixelScale;
        }
    }
    return out;
}

std::vector<int> BinaryDataset::gather_labels(std::span<const std::size_t> indices) const {
    std::vector<int> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
        out.push_back(labels.at(idx));
    }
    return out;
}

BinaryDataset BinaryDataset::subset(std::span<const std::size_t> indices) const {
    BinaryDataset out;
    out.pixels_per_image = pixels_per_image;
    out.pixels.reserve(indices.size() * pixels_per_image);
    out.labels.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= size()) {
            throw IndexError("sample index " + std::to_string(idx) + " out of range");
        }
        const auto first = pixels.begin() + static_cast<std::ptrdiff_t>(idx * pixels_per_image);
        out.pixels.insert(out.pixels.end(), first,
                          first + static_cast<std::ptrdiff_t>(pixels_per_image));
        out.labels.push_back(labels[idx]);
    }
    return out;
}

RawDataset parse_idx(std::span<const std::uint8_t> images,
                     std::span<const std::uint8_t> labels) {
    const std::uint32_t image_magic = read_be32(images, 0, "images");
    if (image_magic != kIdxImagesMagic) {
        throw DataError("wrong magic number in IDX images: expected " +
                        hex32(kIdxImagesMagic) + ", found " + hex32(image_magic));
    }
    const std::uint32_t label_magic = read_be32(labels, 0, "labels");
    if (label_magic != kIdxLabelsMagic) {
        throw DataError("wrong magic number in IDX labels: expected " +
                        hex32(kIdxLabelsMagic) + ", found " + hex32(label_magic));
    }

    RawDataset raw;
    const std::size_t image_count = read_be32(images, 4, "images");
    raw.rows = read_be32(images, 8, "images");
    raw.cols = read_be32(images, 12, "images");
    const std::size_t label_count = read_be32(labels, 4, "labels");
    if (image_count != label_count) {
        throw DataError("count mismatch: images file holds " +
                        std::to_string(image_count) + " samples, labels file " +
                        std::to_string(label_count));
    }

    constexpr std::size_t image_header = 16;
    constexpr std::size_t label_header = 8;
    const std::size_t pixel_bytes = image_count * raw.rows * raw.cols;
    if (images.size() < image_header + pixel_bytes) {
        throw DataError("truncated IDX images: expected " +
                        std::to_string(image_header + pixel_bytes) + " bytes, found " +
                        std::to_string(images.size()));
    }
    if (labels.size() < label_header + label_count) {
        throw DataError("truncated IDX labels: expected " +
                        std::to_string(label_header + label_count) + " bytes, found " +
                        std::to_string(labels.size()));
    }
    raw.pixels.assign(images.begin() + image_header,
                      images.begin() + static_cast<std::ptrdiff_t>(image_header + pixel_bytes));
    raw.labels.assign(labels.begin() + label_header,
                      labels.begin() + static_cast<std::ptrdiff_t>(label_header + label_count));
    return raw;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path) {
    gzFile file = gzopen(path.string().c_str(), "rb");
    if (file == nullptr) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::vector<std::uint8_t> bytes;
    std::vector<std::uint8_t> chunk(1 << 16);
    for (;;) {
        const int n = gzread(file, chunk.data(), static_cast<unsigned>(chunk.size()));
        if (n < 0) {
            int code = 0;
            const std::string reason = gzerror(file, &code);
            gzclose(file);
            throw IoError("failed reading '" + path.string() + "': " + reason);
        }
        if (n == 0) {
            break;
        }
        bytes.insert(bytes.end(), chunk.begin(), chunk.begin() + n);
    }
    gzclose(file);
    return bytes;
}

RawDataset load_idx(const std::filesystem::path &images_path,
                    const std::filesystem::path &labels_path) {
    const auto images = read_file_bytes(images_path);
    const auto labels = read_file_bytes(labels_path);
    return parse_idx(images, labels);
}

BinaryDataset filter_digits(const RawDataset &raw, int negative_digit,
                            int positive_digit) {
    BinaryDataset out;
    out.pixels_per_image = raw.pixels_per_image();
    const std::size_t n = out.pixels_per_image;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const int digit = raw.labels[i];
        if (digit != negative_digit && digit != positive_digit) {
            continue;
        }
        const auto first = raw.pixels.begin() + static_cast<std::ptrdiff_t>(i * n);
        out.pixels.insert(out.pixels.end(), first, first + static_cast<std::ptrdiff_t>(n));
        out.labels.push_back(digit == negative_digit ? 0 : 1);
    }
    return out;
}

SplitDataset split(const BinaryDataset &data, std::size_t train_size,
                   std::size_t val_size, std::uint64_t seed) {
    if (train_size + val_size > data.size()) {
        throw ArgumentError("split of " + std::to_string(train_size) + " + " +
                            std::to_string(val_size) + " samples exceeds the " +
                            std::to_string(data.size()) + " available");
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    SplitDataset out;
    out.train_indices.assign(order.begin(),
                             order.begin() + static_cast<std::ptrdiff_t>(train_size));
    out.validation_indices.assign(
        order.begin() + static_cast<std::ptrdiff_t>(train_size),
        order.begin() + static_cast<std::ptrdiff_t>(train_size + val_size));
    out.train = data.subset(out.train_indices);
    out.validation = data.subset(out.validation_indices);
    return out;
}

std::vector<std::vector<std::size_t>> batches(std::size_t dataset_size,
                                              std::size_t batch_size,
                                              std::uint64_t shuffle_seed,
                                              std::uint64_t epoch) {
    if (batch_size == 0) {
        throw ArgumentError("batch size must be at least 1");
    }
    std::vector<std::size_t> order(dataset_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::seed_seq seq{static_cast<std::uint32_t>(shuffle_seed),
                      static_cast<std::uint32_t>(shuffle_seed >> 32),
                      static_cast<std::uint32_t>(epoch),
                      static_cast<std::uint32_t>(epoch >> 32)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < dataset_size; start += batch_size) {
        const std::size_t end = std::min(dataset_size, start + batch_size);
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

std::vector<std::uint8_t> encode_idx_images(std::size_t rows, std::size_t cols,
                                            std::span<const std::uint8_t> pixels) {
    const std::size_t per_image = rows * cols;
    if (per_image == 0 || pixels.size() % per_image != 0) {
        throw ArgumentError("pixel buffer is not a whole number of images");
    }
    std::vector<std::uint8_t> out;
    out.reserve(16 + pixels.size());
    append_be32(out, kIdxImagesMagic);
    append_be32(out, static_cast<std::uint32_t>(pixels.size() / per_image));
    append_be32(out, static_cast<std::uint32_t>(rows));
    append_be32(out, static_cast<std::uint32_t>(cols));
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    append_be32(out, kIdxLabelsMagic);
    append_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

} // namespace qhybrid
