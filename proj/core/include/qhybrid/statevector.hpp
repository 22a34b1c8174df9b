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
 * Dense statevector of an N-qubit register with in-place kernels for the
 * parametrised one-qubit (YZY Euler) and two-qubit (XX+YY+ZZ exponential)
 * unitaries and for the Pauli strings that generate them.
 *
 * Bit convention: qubit k is bit k of the basis index, so qubit 0 is the
 * least significant bit. Basis index 5 on three qubits is q0=1, q1=0, q2=1.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qhybrid {

using Complex = std::complex<double>;

/// Largest register the simulator accepts.
inline constexpr std::size_t kMaxQubits = 12;

/**
 * U1_k(alpha, beta, gamma) = exp(i alpha Y_k) exp(i beta Z_k) exp(i gamma Y_k).
 * The gamma rotation acts first on the state.
 */
struct GateU1 {
    std::size_t qubit{0};
    double alpha{0.0};
    double beta{0.0};
    double gamma{0.0};
};

/// U2_jk(theta, phi, eta) = exp(i theta XX + i phi YY + i eta ZZ) on (j, k).
struct GateU2 {
    std::size_t qubit_j{0};
    std::size_t qubit_k{1};
    double theta{0.0};
    double phi{0.0};
    double eta{0.0};
};

enum class PauliKind { Y, Z, XX, YY, ZZ };

/// Pauli string used as a derivative generator. `partner` is ignored for
/// the single-qubit kinds.
struct PauliGenerator {
    PauliKind kind{PauliKind::Z};
    std::size_t qubit{0};
    std::size_t partner{0};

    [[nodiscard]] bool is_two_qubit() const noexcept {
        return kind == PauliKind::XX || kind == PauliKind::YY ||
               kind == PauliKind::ZZ;
    }
};

class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits. Throws SizeError outside [1, 12].
    static StateVector zero(std::size_t num_qubits);

    /// Basis state |index>.
    static StateVector basis(std::size_t num_qubits, std::size_t index);

    /// Adopts raw amplitudes; the length must be a power of two >= 2.
    /// No normalisation is performed.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }

    /// Throws IndexError when `basis_index` >= 2^N.
    [[nodiscard]] Complex amplitude(std::size_t basis_index) const;

    void apply_u1(const GateU1 &gate);
    void apply_u2(const GateU2 &gate);

    /// Multiplies by the Pauli string (no factor of i). The result is a
    /// derivative direction, not a physical state.
    void apply_generator(const PauliGenerator &gen);

    /// |amplitude_k|^2 for every k.
    [[nodiscard]] std::vector<double> probabilities() const;

    [[nodiscard]] double norm_squared() const noexcept;

    /// <this|other>, conjugating this.
    [[nodiscard]] Complex inner(const StateVector &other) const;

  private:
    StateVector(std::size_t num_qubits, std::vector<Complex> amps)
        : num_qubits_{num_qubits}, amps_{std::move(amps)} {}

    void check_qubit(std::size_t qubit) const;
    void check_pair(std::size_t j, std::size_t k) const;

    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

/// Value-returning conveniences over the in-place members.
[[nodiscard]] StateVector apply_u1(StateVector state, const GateU1 &gate);
[[nodiscard]] StateVector apply_u2(StateVector state, const GateU2 &gate);
[[nodiscard]] StateVector apply_generator(StateVector state,
                                          const PauliGenerator &gen);

/// Inverse gates: U1(a,b,g)^dagger = U1(-g,-b,-a), U2(t,p,e)^dagger = U2(-t,-p,-e).
[[nodiscard]] GateU1 inverse(const GateU1 &gate) noexcept;
[[nodiscard]] GateU2 inverse(const GateU2 &gate) noexcept;

} // namespace qhybrid
