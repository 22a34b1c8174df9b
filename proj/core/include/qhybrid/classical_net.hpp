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
 * Sequential dense networks with reverse-mode gradients, the logistic angle
 * squash feeding circuit parameters, softmax cross-entropy and Adam.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qhybrid {

/// Row-major dense matrix of doubles. Rows are batch samples where a batch
/// is involved.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_{rows}, cols_{cols}, data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::span<double> row(std::size_t r) {
        return std::span<double>(data_).subspan(r * cols_, cols_);
    }
    [[nodiscard]] std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    bool operator==(const Matrix &) const = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

enum class Activation { Identity, Relu, Sigmoid };

struct DenseLayer {
    Matrix weights; ///< out x in
    std::vector<double> bias;
    Activation activation{Activation::Identity};

    [[nodiscard]] std::size_t in_width() const noexcept { return weights.cols(); }
    [[nodiscard]] std::size_t out_width() const noexcept { return weights.rows(); }
};

/// Gradients with the same layout as the network's parameters.
struct LayerGradient {
    Matrix weights;
    std::vector<double> bias;
};

using NetworkGradient = std::vector<LayerGradient>;

/// Pre-activations and activations of every layer for one batch.
struct ForwardTape {
    Matrix input;
    std::vector<Matrix> pre;  ///< z = x W^T + b
    std::vector<Matrix> post; ///< a = act(z)
};

struct BackwardResult {
    NetworkGradient params;
    Matrix input_grad;
};

class Network {
  public:
    Network() = default;
    explicit Network(std::vector<DenseLayer> layers);

    /// Layers of widths[i] -> widths[i+1] with weights uniform in
    /// [-1/sqrt(fan_in), 1/sqrt(fan_in)] and zero biases.
    static Network make(std::span<const std::size_t> widths,
                        std::span<const Activation> activations,
                        std::mt19937_64 &rng);

    [[nodiscard]] std::size_t in_width() const;
    [[nodiscard]] std::size_t out_width() const;
    [[nodiscard]] std::size_t parameter_count() const noexcept;
    [[nodiscard]] bool empty() const noexcept { return layers_.empty(); }

    [[nodiscard]] std::span<DenseLayer> layers() noexcept { return layers_; }
    [[nodiscard]] std::span<const DenseLayer> layers() const noexcept {
        return layers_;
    }

    /// Throws DimensionError if batch.cols() != in_width().
    [[nodiscard]] Matrix forward(const Matrix &batch, ForwardTape *tape = nullptr) const;

    /// Gradients of sum(upstream .* output) w.r.t. every parameter and the
    /// input. Throws DimensionError on a tape/upstream shape mismatch.
    [[nodiscard]] BackwardResult backward(const ForwardTape &tape,
                                          const Matrix &upstream) const;

    /// Zero-valued gradient shaped like the parameters.
    [[nodiscard]] NetworkGradient zero_gradient() const;

  private:
    std::vector<DenseLayer> layers_;
};

/// theta = pi * sigmoid(x) and d theta / d x, elementwise.
struct AngleMapResult {
    Matrix angles;
    Matrix derivative;
};
[[nodiscard]] AngleMapResult angle_map(const Matrix &raw);

struct LossResult {
    double loss{0.0};
    Matrix grad; ///< d loss / d logits
};

/// Mean over the batch of -log softmax(logits)[label]. Labels index the
/// logit columns.
[[nodiscard]] LossResult cross_entropy(const Matrix &logits,
                                       std::span<const int> labels);

struct AdamConfig {
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};
};

/// Moment accumulators for one network.
struct AdamState {
    NetworkGradient first;
    NetworkGradient second;
    std::uint64_t step{0};

    static AdamState for_network(const Network &net) {
        return AdamState{net.zero_gradient(), net.zero_gradient(), 0};
    }
};

/// One bias-corrected Adam update. Throws TrainingError on non-finite
/// gradients, leaving the network and state untouched.
void adam_step(Network &net, const NetworkGradient &grads, AdamState &state,
               double learning_rate, const AdamConfig &config = {});

} // namespace qhybrid
