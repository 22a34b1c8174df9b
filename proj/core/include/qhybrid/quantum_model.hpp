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
 * Variational circuit model built from U1/U2 slots.
 *
 * A layout is an ordered list of slots applied to |0...0>. Each slot
 * consumes three consecutive angles: (alpha, beta, gamma) for a U1 slot and
 * (theta, phi, eta) for a U2 slot. The model output is either every basis
 * probability (Full) or only p(|0...0>) (Min).
 *
 * Gradients are exact derivatives of the selected probabilities with
 * respect to every angle, obtained by inserting the Pauli generator at the
 * parameter's position. A shot-noise estimator mimics the Hadamard-test
 * protocol: it estimates Re/Im of <0|W^dagger|k> and of <k|W'_m|0> from
 * Bernoulli samples and combines them as 2 (r r~ - i i~).
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qhybrid/statevector.hpp"

namespace qhybrid {

enum class SlotKind { U1, U2 };

struct Slot {
    SlotKind kind{SlotKind::U1};
    std::size_t qubit{0};   ///< U1 target, or first qubit of a U2 pair
    std::size_t partner{0}; ///< second qubit of a U2 pair

    bool operator==(const Slot &) const = default;
};

/// Ordered gate slots on a fixed register. M = 3 * slot count.
class CircuitLayout {
  public:
    static constexpr std::size_t kParamsPerSlot = 3;

    /**
     * Expands layout tokens in order:
     *  - `u1-all`   U1 on qubits 0..N-1 ascending
     *  - `u2-even`  U2 on (0,1), (2,3), ...
     *  - `u2-odd`   U2 on (1,2), (3,4), ...
     *  - `u1@k`     a single U1 on qubit k
     *  - `u2@j:k`   a single U2 on (j, k)
     * Throws ArgumentError on malformed or empty-layer tokens, IndexError on
     * out-of-range qubits and SizeError on an unsupported register size.
     */
    static CircuitLayout build(std::size_t num_qubits,
                               std::span<const std::string> tokens);

    /// Same as build() with a comma separated token list.
    static CircuitLayout parse(std::size_t num_qubits, std::string_view tokens);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t num_params() const noexcept {
        return kParamsPerSlot * slots_.size();
    }
    [[nodiscard]] std::span<const Slot> slots() const noexcept { return slots_; }

    /// Slot owning parameter `param_index`.
    [[nodiscard]] const Slot &slot_of(std::size_t param_index) const;

  private:
    CircuitLayout(std::size_t n, std::vector<Slot> slots)
        : num_qubits_{n}, slots_{std::move(slots)} {}

    std::size_t num_qubits_;
    std::vector<Slot> slots_;
};

enum class OutputMode { Full, Min };

struct OutputSelection {
    OutputMode mode{OutputMode::Full};

    /// Q1: 2^N for Full, 1 for Min.
    [[nodiscard]] std::size_t count(std::size_t num_qubits) const noexcept {
        return mode == OutputMode::Full ? (std::size_t{1} << num_qubits) : 1;
    }
};

[[nodiscard]] OutputMode parse_output_mode(std::string_view text);
[[nodiscard]] std::string_view to_string(OutputMode mode) noexcept;

/// Q1 x M matrix, row-major. Row k is a selected basis state, column m a
/// circuit parameter.
class GradientMatrix {
  public:
    GradientMatrix() = default;
    GradientMatrix(std::size_t rows, std::size_t cols)
        : rows_{rows}, cols_{cols}, data_(rows * cols, 0.0) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double &operator()(std::size_t k, std::size_t m) { return data_[k * cols_ + m]; }
    double operator()(std::size_t k, std::size_t m) const {
        return data_[k * cols_ + m];
    }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    bool operator==(const GradientMatrix &) const = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

/// W(angles)|0...0>.
[[nodiscard]] StateVector prepare_state(const CircuitLayout &layout,
                                        std::span<const double> angles);

/// Selected output probabilities, length Q1.
[[nodiscard]] std::vector<double> forward(const CircuitLayout &layout,
                                          std::span<const double> angles,
                                          OutputSelection selection);

/// W'_m|0...0>: the circuit with i*G inserted at parameter m.
[[nodiscard]] StateVector derivative_state(const CircuitLayout &layout,
                                           std::span<const double> angles,
                                           std::size_t param_index);

enum class GradientMethod {
    Auto,            ///< picks the cheaper of the two below
    Adjoint,         ///< one reverse sweep carrying Q1 bra states
    DerivativeStates ///< prefix cache plus one suffix pass per parameter
};

/// d p_k / d w_m for every selected k and every parameter m.
[[nodiscard]] GradientMatrix gradient_exact(const CircuitLayout &layout,
                                            std::span<const double> angles,
                                            OutputSelection selection,
                                            GradientMethod method = GradientMethod::Auto);

/// Angles with entry m advanced by pi/2. W(shifted)|0> equals W'_m|0>.
[[nodiscard]] std::vector<double> shifted_angles(const CircuitLayout &layout,
                                                 std::span<const double> angles,
                                                 std::size_t param_index);

/**
 * Overlaps entering the Hadamard-test gradient:
 *   r_k  = Re <0|W^dagger|k>,      i_k  = Im <0|W^dagger|k>
 *   r~km = Re <k|W'_m|0>,          i~km = Im <k|W'_m|0>
 * `r_shift` and `i_shift` are Q1 x M row-major. When `shots` is zero the
 * entries are exact; otherwise each is an empirical estimate 2f-1.
 */
struct HadamardEstimates {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<double> r;
    std::vector<double> i;
    std::vector<double> r_shift;
    std::vector<double> i_shift;
    std::uint64_t shots_per_estimate{0};
};

[[nodiscard]] HadamardEstimates exact_overlaps(const CircuitLayout &layout,
                                               std::span<const double> angles,
                                               OutputSelection selection);

/// Replaces every overlap v by (2/shots) * Binomial(shots, (1+v)/2) - 1.
[[nodiscard]] HadamardEstimates sample_overlaps(const HadamardEstimates &exact,
                                                std::uint64_t shots,
                                                std::mt19937_64 &rng);

/// 2 (r_k r~km - i_k i~km).
[[nodiscard]] GradientMatrix combine_overlaps(const HadamardEstimates &est);

/// Shot-noise gradient estimate, deterministic for a fixed seed.
[[nodiscard]] GradientMatrix gradient_sampled(const CircuitLayout &layout,
                                              std::span<const double> angles,
                                              OutputSelection selection,
                                              std::uint64_t shots,
                                              std::uint64_t seed);

/// N_C = min(2^N M, 2 Q1 (M+1)).
[[nodiscard]] std::uint64_t circuit_count(std::size_t num_qubits,
                                          std::size_t num_params,
                                          std::size_t num_outputs);
[[nodiscard]] std::uint64_t circuit_count(const CircuitLayout &layout,
                                          OutputSelection selection);

struct ComplexityQuery {
    std::size_t num_outputs{1};
    std::size_t num_params{1};
    double epsilon{0.1};
    double max_variance{1.0};
};

/// ceil(Q1 M maxVar / eps^2): shots per expectation value that keep the
/// mean squared gradient error at or below eps^2.
[[nodiscard]] std::uint64_t sample_bound(const ComplexityQuery &query);

} // namespace qhybrid
