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
// Synthetic IDX data and scratch directories for tests that exercise the
// data pipeline and the runner without the MNIST distribution files.
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qhybrid/mnist_data.hpp"
#include "qhybrid/runner/results_io.hpp"

namespace fixture {

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string &tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("qhybrid_" + tag + "_" + std::to_string(rd()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    [[nodiscard]] const std::filesystem::path &path() const { return path_; }

  private:
    std::filesystem::path path_;
};

/// 28 x 28 strokes loosely shaped like the digit, jittered and noisy.
inline std::vector<std::uint8_t> synthetic_digit(int digit, std::mt19937_64 &rng) {
    std::vector<std::uint8_t> img(28 * 28, 0);
    std::uniform_int_distribution<int> shift(-2, 2);
    std::uniform_int_distribution<int> noise(0, 40);
    const int dx = shift(rng);
    const int dy = shift(rng);
    auto put = [&](int r, int c) {
        r += dy;
        c += dx;
        if (r >= 0 && r < 28 && c >= 0 && c < 28) {
            img[static_cast<std::size_t>(r * 28 + c)] = 255;
        }
    };
    auto hbar = [&](int r, int c0, int c1) {
        for (int c = c0; c <= c1; ++c) {
            put(r, c);
            put(r + 1, c);
        }
    };
    auto vbar = [&](int c, int r0, int r1) {
        for (int r = r0; r <= r1; ++r) {
            put(r, c);
            put(r, c + 1);
        }
    };
    switch (digit) {
    case 3:
        hbar(5, 8, 19);
        hbar(13, 10, 19);
        hbar(21, 8, 19);
        vbar(19, 5, 22);
        break;
    case 7:
        hbar(5, 7, 20);
        for (int r = 6; r <= 22; ++r) {
            put(r, 20 - (r - 6) / 2);
            put(r, 21 - (r - 6) / 2);
        }
        break;
    case 1:
        vbar(14, 4, 23);
        break;
    default:
        hbar(5, 8, 19);
        vbar(8, 5, 13);
        hbar(13, 8, 19);
        vbar(19, 13, 22);
        hbar(21, 8, 19);
        break;
    }
    for (auto &p : img) {
        if (p == 0) {
            p = static_cast<std::uint8_t>(noise(rng));
        }
    }
    return img;
}

struct IdxFiles {
    std::filesystem::path images;
    std::filesystem::path labels;
    std::size_t threes{0};
    std::size_t sevens{0};
};

/// Writes a synthetic IDX pair with `count` images drawn from the digits
/// {3, 7, 1, 5}, roughly 40% threes, 40% sevens.
inline IdxFiles write_synthetic_idx(const std::filesystem::path &dir, std::size_t count,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick({40, 40, 10, 10});
    constexpr int kDigits[] = {3, 7, 1, 5};
    std::vector<std::uint8_t> pixels;
    std::vector<std::uint8_t> labels;
    IdxFiles out;
    for (std::size_t i = 0; i < count; ++i) {
        const int digit = kDigits[pick(rng)];
        const auto img = synthetic_digit(digit, rng);
        pixels.insert(pixels.end(), img.begin(), img.end());
        labels.push_back(static_cast<std::uint8_t>(digit));
        out.threes += digit == 3 ? 1 : 0;
        out.sevens += digit == 7 ? 1 : 0;
    }
    out.images = dir / "images-idx3-ubyte";
    out.labels = dir / "labels-idx1-ubyte";
    const auto img_bytes = qhybrid::encode_idx_images(28, 28, pixels);
    const auto lab_bytes = qhybrid::encode_idx_labels(labels);
    qhybrid::write_text_file(out.images,
                             std::string(img_bytes.begin(), img_bytes.end()));
    qhybrid::write_text_file(out.labels,
                             std::string(lab_bytes.begin(), lab_bytes.end()));
    return out;
}

/// Config text for a small model over the given files.
inline std::string small_config(const IdxFiles &files, const std::string &model_block,
                                std::size_t epochs, std::size_t train_size,
                                std::size_t val_size, std::size_t runs,
                                const std::filesystem::path &out_dir) {
    return "model:\n" + model_block + "train:\n  batch_size: 16\n  epochs: " +
           std::to_string(epochs) + "\n  learning_rate: 0.001\n  train_size: " +
           std::to_string(train_size) + "\n  val_size: " + std::to_string(val_size) +
           "\ndata:\n  images: " + files.images.string() + "\n  labels: " +
           files.labels.string() + "\nrun:\n  base_seed: 11\n  bootstrap_count: " +
           std::to_string(runs) + "\n  out_dir: " + out_dir.string() + "\n";
}

inline const std::string kClassicalBlock =
    "  encoder_units: 3\n  middle: classical\n  classical_units: 2\n";
inline const std::string kQuantumBlock =
    "  encoder_units: 3\n  middle: quantum\n  qubits: 1\n  layout: u1-all\n"
    "  selection: full\n";

} // namespace fixture
