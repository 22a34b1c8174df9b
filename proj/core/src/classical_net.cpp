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
#include "qhybrid/classical_net.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

double activate(Activation act, double z) {
    switch (act) {
    case Activation::Relu:
        return z > 0.0 ? z : 0.0;
    case Activation::Sigmoid:
        return 1.0 / (1.0 + std::exp(-z));
    case Activation::Identity:
        break;
    }
    return z;
}

// Derivative expressed through the pre-activation z and the output a.
double activate_grad(Activation act, double z, double a) {
    switch (act) {
    case Activation::Relu:
        return z > 0.0 ? 1.0 : 0.0;
    case Activation::Sigmoid:
        return a * (1.0 - a);
    case Activation::Identity:
        break;
    }
    return 1.0;
}

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return std::isfinite(v); });
}

std::string shape(const Matrix &m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

} // namespace

Network::Network(std::vector<DenseLayer> layers) : layers_{std::move(layers)} {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const DenseLayer &layer = layers_[i];
        if (layer.bias.size() != layer.out_width()) {
            throw DimensionError("layer " + std::to_string(i) + " has " +
                                 std::to_string(layer.out_width()) +
                                 " outputs but " +
                                 std::to_string(layer.bias.size()) + " biases");
        }
        if (i > 0 && layers_[i - 1].out_width() != layer.in_width()) {
            throw DimensionError(
                "layer " + std::to_string(i) + " expects " +
                std::to_string(layer.in_width()) + " inputs, previous layer emits " +
                std::to_string(layers_[i - 1].out_width()));
        }
    }
}

Network Network::make(std::span<const std::size_t> widths,
                      std::span<const Activation> activations,
                      std::mt19937_64 &rng) {
    if (widths.size() < 2 || activations.size() != widths.size() - 1) {
        throw ArgumentError("network needs n+1 widths for n activations");
    }
    std::vector<DenseLayer> layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const std::size_t in = widths[i];
        const std::size_t out = widths[i + 1];
        if (in == 0 || out == 0) {
            throw ArgumentError("network layer widths must be positive");
        }
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        DenseLayer layer{Matrix(out, in), std::vector<double>(out, 0.0),
                         activations[i]};
        for (double &w : layer.weights.data()) {
            w = dist(rng);
        }
        layers.push_back(std::move(layer));
    }
    return Network{std::move(layers)};
}

std::size_t Network::in_width() const {
    if (layers_.empty()) {
        throw DimensionError("empty network has no input width");
    }
    return layers_.front().in_width();
}

std::size_t Network::out_width() const {
    if (layers_.empty()) {
        throw DimensionError("empty network has no output width");
    }
    return layers_.back().out_width();
}

std::size_t Network::parameter_count() const noexcept {
    std::size_t total = 0;
    for (const auto &layer : layers_) {
        total += layer.weights.data().size() + layer.bias.size();
    }
    return total;
}

Matrix Network::forward(const Matrix &batch, ForwardTape *tape) const {
    if (batch.cols() != in_width()) {
        throw DimensionError("network expects " + std::to_string(in_width()) +
                             " input features, batch has " +
                             std::to_string(batch.cols()));
    }
    if (tape != nullptr) {
        tape->input = batch;
        tape->pre.clear();
        tape->post.clear();
    }
    Matrix current = batch;
    for (const DenseLayer &layer : layers_) {
        const std::size_t out = layer.out_width();
        const std::size_t in = layer.in_width();
        Matrix z(current.rows(), out);
        for (std::size_t b = 0; b < current.rows(); ++b) {
            const auto x = current.row(b);
            auto zr = z.row(b);
            for (std::size_t o = 0; o < out; ++o) {
                const auto w = layer.weights.row(o);
                double acc = layer.bias[o];
                for (std::size_t i = 0; i < in; ++i) {
                    acc += w[i] * x[i];
                }
                zr[o] = acc;
            }
        }
        Matrix a = z;
        if (layer.activation != Activation::Identity) {
            for (double &v : a.data()) {
                v = activate(layer.activation, v);
            }
        }
        if (tape != nullptr) {
            tape->pre.push_back(std::move(z));
            tape->post.push_back(a);
        }
        current = std::move(a);
    }
    return current;
}

BackwardResult Network::backward(const ForwardTape &tape,
                                 const Matrix &upstream) const {
    if (tape.pre.size() != layers_.size() || tape.post.size() != layers_.size()) {
        throw DimensionError("tape records " + std::to_string(tape.pre.size()) +
                             " layers, network has " +
                             std::to_string(layers_.size()));
    }
    const std::size_t batch = tape.input.rows();
    if (upstream.rows() != batch || upstream.cols() != out_width()) {
        throw DimensionError("upstream gradient is " + shape(upstream) +
                             ", expected " + std::to_string(batch) + "x" +
                             std::to_string(out_width()));
    }

    BackwardResult result;
    result.params.resize(layers_.size());
    Matrix delta = upstream;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const DenseLayer &layer = layers_[l];
        const Matrix &z = tape.pre[l];
        const Matrix &a = tape.post[l];
        const Matrix &x = l == 0 ? tape.input : tape.post[l - 1];
        if (z.rows() != batch || z.cols() != layer.out_width() ||
            x.cols() != layer.in_width()) {
            throw DimensionError("stale tape at layer " + std::to_string(l));
        }
        if (layer.activation != Activation::Identity) {
            auto d = delta.data();
            const auto zd = z.data();
            const auto ad = a.data();
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] *= activate_grad(layer.activation, zd[i], ad[i]);
            }
        }

        LayerGradient grad{Matrix(layer.out_width(), layer.in_width()),
                           std::vector<double>(layer.out_width(), 0.0)};
        Matrix input_grad(batch, layer.in_width());
        for (std::size_t b = 0; b < batch; ++b) {
            const auto dr = delta.row(b);
            const auto xr = x.row(b);
            auto gx = input_grad.row(b);
            for (std::size_t o = 0; o < layer.out_width(); ++o) {
                const double d = dr[o];
                grad.bias[o] += d;
                if (d == 0.0) {
                    continue;
                }
                auto gw = grad.weights.row(o);
                const auto w = layer.weights.row(o);
                for (std::size_t i = 0; i < layer.in_width(); ++i) {
                    gw[i] += d * xr[i];
                    gx[i] += d * w[i];
                }
            }
        }
        result.params[l] = std::move(grad);
        delta = std::move(input_grad);
    }
    result.input_grad = std::move(delta);
    return result;
}

NetworkGradient Network::zero_gradient() const {
    NetworkGradient grads;
    grads.reserve(layers_.size());
    for (const auto &layer : layers_) {
        grads.push_back(LayerGradient{Matrix(layer.out_width(), layer.in_width()),
                                      std::vector<double>(layer.out_width(), 0.0)});
    }
    return grads;
}

AngleMapResult angle_map(const Matrix &raw) {
    AngleMapResult out{Matrix(raw.rows(), raw.cols()), Matrix(raw.rows(), raw.cols())};
    const auto in = raw.data();
    auto theta = out.angles.data();
    auto deriv = out.derivative.data();
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double x = in[i];
        // Stable logistic for either sign of x.
        const double sig = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                                    : std::exp(x) / (1.0 + std::exp(x));
        theta[i] = std::numbers::pi * sig;
        deriv[i] = std::numbers::pi * sig * (1.0 - sig);
    }
    return out;
}

LossResult cross_entropy(const Matrix &logits, std::span<const int> labels) {
    if (logits.rows() != labels.size()) {
        throw DimensionError("cross entropy: " + std::to_string(logits.rows()) +
                             " logit rows but " + std::to_string(labels.size()) +
                             " labels");
    }
    if (logits.rows() == 0 || logits.cols() < 2) {
        throw DimensionError("cross entropy needs a non-empty batch with at "
                             "least two classes, got " +
                             shape(logits));
    }
    const std::size_t batch = logits.rows();
    const double inv_batch = 1.0 / static_cast<double>(batch);
    LossResult out{0.0, Matrix(batch, logits.cols())};
    for (std::size_t b = 0; b < batch; ++b) {
        const int label = labels[b];
        if (label < 0 || static_cast<std::size_t>(label) >= logits.cols()) {
            throw ArgumentError("label " + std::to_string(label) +
                                " outside [0, " + std::to_string(logits.cols()) +
                                ")");
        }
        const auto z = logits.row(b);
        const double peak = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (double v : z) {
            sum += std::exp(v - peak);
        }
        const double log_norm = peak + std::log(sum);
        out.loss += (log_norm - z[static_cast<std::size_t>(label)]) * inv_batch;
        auto g = out.grad.row(b);
        for (std::size_t c = 0; c < z.size(); ++c) {
            g[c] = std::exp(z[c] - log_norm) * inv_batch;
        }
        g[static_cast<std::size_t>(label)] -= inv_batch;
    }
    return out;
}

void adam_step(Network &net, const NetworkGradient &grads, AdamState &state,
               double learning_rate, const AdamConfig &config) {
    auto layers = net.layers();
    if (grads.size() != layers.size() || state.first.size() != layers.size() ||
        state.second.size() != layers.size()) {
        throw DimensionError("adam: gradient/state layer count does not match "
                             "the network");
    }
    for (const auto &g : grads) {
        if (!all_finite(g.weights.data()) || !all_finite(g.bias)) {
            throw TrainingError("non-finite gradient encountered in optimizer "
                                "step " +
                                std::to_string(state.step + 1));
        }
    }

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(config.beta1, t);
    const double correction2 = 1.0 - std::pow(config.beta2, t);

    auto update = [&](std::span<double> params, std::span<const double> g,
                      std::span<double> m, std::span<double> v) {
        if (params.size() != g.size() || m.size() != g.size() ||
            v.size() != g.size()) {
            throw DimensionError("adam: parameter and gradient shapes differ");
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
        }
    };

    for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weights.data(), grads[l].weights.data(),
               state.first[l].weights.data(), state.second[l].weights.data());
        update(layers[l].bias, grads[l].bias, state.first[l].bias,
               state.second[l].bias);
    }
}

} // namespace qhybrid
