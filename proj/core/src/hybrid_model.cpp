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
#include "qhybrid/hybrid_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};

Matrix quantum_middle_forward(const QuantumMiddle &q, const Matrix &angles) {
    Matrix out(angles.rows(), q.out_width());
    for (std::size_t b = 0; b < angles.rows(); ++b) {
        const auto probs = forward(q.layout, angles.row(b), q.selection);
        std::copy(probs.begin(), probs.end(), out.row(b).begin());
    }
    return out;
}

} // namespace

std::size_t MainModel::middle_in_width() const {
    return std::visit(overloaded{[](const QuantumMiddle &q) { return q.in_width(); },
                                 [](const ClassicalMiddle &c) {
                                     return c.net.in_width();
                                 }},
                      middle_);
}

std::size_t MainModel::middle_out_width() const {
    return std::visit(overloaded{[](const QuantumMiddle &q) { return q.out_width(); },
                                 [](const ClassicalMiddle &c) {
                                     return c.net.out_width();
                                 }},
                      middle_);
}

std::size_t MainModel::parameter_count() const noexcept {
    std::size_t total = encoder_.parameter_count() + decoder_.parameter_count();
    if (const auto *c = std::get_if<ClassicalMiddle>(&middle_)) {
        total += c->net.parameter_count();
    }
    return total;
}

HybridForward hybrid_forward(const MainModel &model, const Matrix &batch) {
    HybridForward out;
    HybridTape &tape = out.tape;
    tape.o12 = model.encoder().forward(batch, &tape.encoder);
    if (tape.o12.cols() != model.middle_in_width()) {
        throw DimensionError("encoder emits " + std::to_string(tape.o12.cols()) +
                             " values, middle expects " +
                             std::to_string(model.middle_in_width()));
    }
    if (const auto *q = std::get_if<QuantumMiddle>(&model.middle())) {
        auto mapped = angle_map(tape.o12);
        tape.angles = std::move(mapped.angles);
        tape.angle_slope = std::move(mapped.derivative);
        tape.o23 = quantum_middle_forward(*q, tape.angles);
    } else {
        const auto &c = std::get<ClassicalMiddle>(model.middle());
        tape.middle.emplace();
        tape.o23 = c.net.forward(tape.o12, &*tape.middle);
    }
    out.logits = model.decoder().forward(tape.o23, &tape.decoder);
    return out;
}

Matrix hybrid_predict(const MainModel &model, const Matrix &batch) {
    const Matrix o12 = model.encoder().forward(batch);
    if (o12.cols() != model.middle_in_width()) {
        throw DimensionError("encoder emits " + std::to_string(o12.cols()) +
                             " values, middle expects " +
                             std::to_string(model.middle_in_width()));
    }
    Matrix o23;
    if (const auto *q = std::get_if<QuantumMiddle>(&model.middle())) {
        o23 = quantum_middle_forward(*q, angle_map(o12).angles);
    } else {
        o23 = std::get<ClassicalMiddle>(model.middle()).net.forward(o12);
    }
    return model.decoder().forward(o23);
}

HybridGradient hybrid_backward(const MainModel &model, const HybridTape &tape,
                               const Matrix &loss_grad) {
    const std::size_t batch = tape.o12.rows();
    if (loss_grad.rows() != batch || tape.o23.rows() != batch) {
        throw DimensionError("stale hybrid tape: batch of " + std::to_string(batch) +
                             " against a loss gradient of " +
                             std::to_string(loss_grad.rows()) + " rows");
    }
    HybridGradient out;
    auto decoder = model.decoder().backward(tape.decoder, loss_grad);
    out.decoder = std::move(decoder.params);
    out.g23 = std::move(decoder.input_grad);

    if (const auto *q = std::get_if<QuantumMiddle>(&model.middle())) {
        if (tape.angles.rows() != batch || tape.angles.cols() != q->in_width()) {
            throw DimensionError("stale hybrid tape: no circuit angles recorded");
        }
        const std::size_t params = q->in_width();
        out.g12 = Matrix(batch, params);
        for (std::size_t b = 0; b < batch; ++b) {
            const GradientMatrix jac =
                gradient_exact(q->layout, tape.angles.row(b), q->selection);
            const auto g23 = out.g23.row(b);
            const auto slope = tape.angle_slope.row(b);
            auto g12 = out.g12.row(b);
            for (std::size_t m = 0; m < params; ++m) {
                double acc = 0.0;
                for (std::size_t k = 0; k < jac.rows(); ++k) {
                    acc += g23[k] * jac(k, m);
                }
                g12[m] = acc * slope[m];
            }
        }
    } else {
        if (!tape.middle) {
            throw DimensionError("stale hybrid tape: classical middle not recorded");
        }
        auto middle = std::get<ClassicalMiddle>(model.middle())
                          .net.backward(*tape.middle, out.g23);
        out.middle = std::move(middle.params);
        out.g12 = std::move(middle.input_grad);
    }

    out.encoder = model.encoder().backward(tape.encoder, out.g12).params;
    return out;
}

std::string DimensionDiagnostic::message() const {
    return "dimension mismatch at " + boundary + ": expected " +
           std::to_string(expected) + ", got " + std::to_string(actual);
}

std::optional<DimensionDiagnostic>
dimension_check(const MainModel &model, std::span<const double> sample) {
    if (model.encoder().empty() || model.decoder().empty()) {
        return DimensionDiagnostic{"model", 1, 0};
    }
    if (const auto *c = std::get_if<ClassicalMiddle>(&model.middle());
        c != nullptr && c->net.empty()) {
        return DimensionDiagnostic{"middle", 1, 0};
    }
    if (sample.size() != model.encoder().in_width()) {
        return DimensionDiagnostic{"input->encoder", model.encoder().in_width(),
                                   sample.size()};
    }
    if (model.encoder().out_width() != model.middle_in_width()) {
        return DimensionDiagnostic{"encoder->middle", model.middle_in_width(),
                                   model.encoder().out_width()};
    }
    if (model.middle_out_width() != model.decoder().in_width()) {
        return DimensionDiagnostic{"middle->decoder", model.decoder().in_width(),
                                   model.middle_out_width()};
    }
    if (model.decoder().out_width() != kNumClasses) {
        return DimensionDiagnostic{"decoder->loss", kNumClasses,
                                   model.decoder().out_width()};
    }
    Matrix one(1, sample.size());
    std::copy(sample.begin(), sample.end(), one.row(0).begin());
    const Matrix logits = hybrid_predict(model, one);
    if (logits.cols() != kNumClasses) {
        return DimensionDiagnostic{"decoder->loss", kNumClasses, logits.cols()};
    }
    return std::nullopt;
}

void require_dimensions(const MainModel &model, std::span<const double> sample) {
    if (const auto diag = dimension_check(model, sample)) {
        throw DimensionError(diag->message());
    }
}

OptimizerState OptimizerState::for_model(const MainModel &model) {
    OptimizerState state{AdamState::for_network(model.encoder()), {},
                         AdamState::for_network(model.decoder())};
    if (const auto *c = std::get_if<ClassicalMiddle>(&model.middle())) {
        state.middle = AdamState::for_network(c->net);
    }
    return state;
}

int predicted_class(std::span<const double> logits) noexcept {
    int best = 0;
    for (std::size_t c = 1; c < logits.size(); ++c) {
        if (logits[c] > logits[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(c);
        }
    }
    return best;
}

double accuracy(const Matrix &logits, std::span<const int> labels) {
    if (logits.rows() != labels.size()) {
        throw DimensionError("accuracy: " + std::to_string(logits.rows()) +
                             " predictions for " + std::to_string(labels.size()) +
                             " labels");
    }
    if (labels.empty()) {
        throw ArgumentError("accuracy of an empty sample set");
    }
    std::size_t hits = 0;
    for (std::size_t b = 0; b < labels.size(); ++b) {
        hits += predicted_class(logits.row(b)) == labels[b] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

StepResult train_step(MainModel &model, OptimizerState &optimizer,
                      const Matrix &batch, std::span<const int> labels,
                      double learning_rate) {
    const HybridForward fwd = hybrid_forward(model, batch);
    const LossResult loss = cross_entropy(fwd.logits, labels);
    if (!std::isfinite(loss.loss)) {
        throw TrainingError("non-finite training loss");
    }
    const HybridGradient grads = hybrid_backward(model, fwd.tape, loss.grad);
    adam_step(model.encoder(), grads.encoder, optimizer.encoder, learning_rate);
    if (auto *c = std::get_if<ClassicalMiddle>(&model.middle())) {
        adam_step(c->net, grads.middle, optimizer.middle, learning_rate);
    }
    adam_step(model.decoder(), grads.decoder, optimizer.decoder, learning_rate);
    return StepResult{loss.loss, accuracy(fwd.logits, labels)};
}

double evaluate(const MainModel &model, const Matrix &inputs,
                std::span<const int> labels) {
    if (labels.empty()) {
        throw ArgumentError("evaluate called on an empty dataset");
    }
    return accuracy(hybrid_predict(model, inputs), labels);
}

} // namespace qhybrid
