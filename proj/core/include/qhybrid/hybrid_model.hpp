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
 * Three-stage model: classical encoder, quantum or classical middle,
 * classical decoder.
 *
 * With a quantum middle the encoder output o12 is squashed into circuit
 * angles, each sample defines its own circuit, and the selected
 * probabilities o23 feed the decoder. Backward contracts the decoder's
 * input gradient g23 with each sample's Q1 x M probability Jacobian and the
 * squash derivative to obtain g12, then runs the encoder backward on g12.
 * The encoder gradients are therefore those of L' = sum(o12 .* g12) with
 * g12 held fixed.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "qhybrid/classical_net.hpp"
#include "qhybrid/quantum_model.hpp"

namespace qhybrid {

/// Number of class logits the decoder must produce.
inline constexpr std::size_t kNumClasses = 2;

struct QuantumMiddle {
    CircuitLayout layout;
    OutputSelection selection;

    [[nodiscard]] std::size_t in_width() const noexcept { return layout.num_params(); }
    [[nodiscard]] std::size_t out_width() const noexcept {
        return selection.count(layout.num_qubits());
    }
};

struct ClassicalMiddle {
    Network net;
};

using Middle = std::variant<QuantumMiddle, ClassicalMiddle>;

class MainModel {
  public:
    MainModel(Network encoder, Middle middle, Network decoder)
        : encoder_{std::move(encoder)}, middle_{std::move(middle)},
          decoder_{std::move(decoder)} {}

    [[nodiscard]] const Network &encoder() const noexcept { return encoder_; }
    [[nodiscard]] Network &encoder() noexcept { return encoder_; }
    [[nodiscard]] const Middle &middle() const noexcept { return middle_; }
    [[nodiscard]] Middle &middle() noexcept { return middle_; }
    [[nodiscard]] const Network &decoder() const noexcept { return decoder_; }
    [[nodiscard]] Network &decoder() noexcept { return decoder_; }

    [[nodiscard]] bool is_quantum() const noexcept {
        return std::holds_alternative<QuantumMiddle>(middle_);
    }

    [[nodiscard]] std::size_t middle_in_width() const;
    [[nodiscard]] std::size_t middle_out_width() const;

    /// Trainable parameters (K_tot). A quantum middle contributes none.
    [[nodiscard]] std::size_t parameter_count() const noexcept;

  private:
    Network encoder_;
    Middle middle_;
    Network decoder_;
};

struct HybridTape {
    ForwardTape encoder;
    Matrix o12;         ///< encoder output, B x middle input width
    Matrix angles;      ///< quantum only: squashed o12
    Matrix angle_slope; ///< quantum only: d angles / d o12
    std::optional<ForwardTape> middle;
    Matrix o23; ///< middle output, B x decoder input width
    ForwardTape decoder;
};

struct HybridForward {
    Matrix logits;
    HybridTape tape;
};

[[nodiscard]] HybridForward hybrid_forward(const MainModel &model,
                                           const Matrix &batch);

/// Logits only; skips every tape allocation.
[[nodiscard]] Matrix hybrid_predict(const MainModel &model, const Matrix &batch);

struct HybridGradient {
    NetworkGradient encoder;
    NetworkGradient middle; ///< empty for a quantum middle
    NetworkGradient decoder;
    Matrix g23; ///< d loss / d middle output
    Matrix g12; ///< d loss / d encoder output
};

[[nodiscard]] HybridGradient hybrid_backward(const MainModel &model,
                                             const HybridTape &tape,
                                             const Matrix &loss_grad);

struct DimensionDiagnostic {
    std::string boundary; ///< e.g. "encoder->middle"
    std::size_t expected{0};
    std::size_t actual{0};

    [[nodiscard]] std::string message() const;
};

/// Checks every stage boundary, then runs one single-sample forward.
/// Returns the first mismatch, or nothing when the model is consistent.
[[nodiscard]] std::optional<DimensionDiagnostic>
dimension_check(const MainModel &model, std::span<const double> sample);

/// Throws DimensionError carrying the diagnostic message.
void require_dimensions(const MainModel &model, std::span<const double> sample);

struct OptimizerState {
    AdamState encoder;
    AdamState middle;
    AdamState decoder;

    static OptimizerState for_model(const MainModel &model);
};

struct StepResult {
    double loss{0.0};
    double accuracy{0.0};
};

/// forward, cross entropy, backward and one Adam update of every trainable
/// network. Throws TrainingError on a non-finite loss or gradient.
StepResult train_step(MainModel &model, OptimizerState &optimizer,
                      const Matrix &batch, std::span<const int> labels,
                      double learning_rate);

/// Index of the largest logit per row; ties go to the lower class.
[[nodiscard]] int predicted_class(std::span<const double> logits) noexcept;

/// Fraction of rows whose predicted class equals the label.
[[nodiscard]] double accuracy(const Matrix &logits, std::span<const int> labels);

/// Accuracy over a full sample set. Throws ArgumentError when empty.
[[nodiscard]] double evaluate(const MainModel &model, const Matrix &inputs,
                              std::span<const int> labels);

} // namespace qhybrid
