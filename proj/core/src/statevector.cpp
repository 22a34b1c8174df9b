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
#include "qhybrid/statevector.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

using Mat2 = std::array<Complex, 4>; // row-major

constexpr Complex kI{0.0, 1.0};

Mat2 mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// exp(i a Y) = cos a I + i sin a Y = [[c, s], [-s, c]]
Mat2 exp_iy(double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {Complex{c, 0.0}, Complex{s, 0.0}, Complex{-s, 0.0}, Complex{c, 0.0}};
}

Mat2 exp_iz(double b) {
    return {std::polar(1.0, b), Complex{}, Complex{}, std::polar(1.0, -b)};
}

// Spreads the bits of `t` around two zero bits at positions lo < hi.
inline std::size_t insert_two_zero_bits(std::size_t t, std::size_t lo,
                                        std::size_t hi) noexcept {
    const std::size_t lo_mask = (std::size_t{1} << lo) - 1;
    t = (t & lo_mask) | ((t & ~lo_mask) << 1);
    const std::size_t hi_mask = (std::size_t{1} << hi) - 1;
    return (t & hi_mask) | ((t & ~hi_mask) << 1);
}

template <typename Kernel>
void for_each_pair(std::size_t size, std::size_t qubit, Kernel &&kernel) {
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            kernel(base + off, base + off + stride);
        }
    }
}

// Visits (i00, i01, i10, i11) where the second index digit is qubit j and
// the first is qubit k, i.e. i01 has bit j set and i10 has bit k set.
template <typename Kernel>
void for_each_quad(std::size_t size, std::size_t j, std::size_t k,
                   Kernel &&kernel) {
    const std::size_t bj = std::size_t{1} << j;
    const std::size_t bk = std::size_t{1} << k;
    const std::size_t lo = std::min(j, k);
    const std::size_t hi = std::max(j, k);
    const std::size_t quarter = size / 4;
    for (std::size_t t = 0; t < quarter; ++t) {
        const std::size_t i00 = insert_two_zero_bits(t, lo, hi);
        kernel(i00, i00 | bj, i00 | bk, i00 | bj | bk);
    }
}

} // namespace

StateVector StateVector::zero(std::size_t num_qubits) {
    return basis(num_qubits, 0);
}

StateVector StateVector::basis(std::size_t num_qubits, std::size_t index) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw SizeError("qubit count " + std::to_string(num_qubits) +
                        " outside supported range [1, " +
                        std::to_string(kMaxQubits) + "]");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (index >= dim) {
        throw IndexError("basis index " + std::to_string(index) +
                         " out of range for " + std::to_string(num_qubits) +
                         " qubits");
    }
    std::vector<Complex> amps(dim);
    amps[index] = Complex{1.0, 0.0};
    return StateVector{num_qubits, std::move(amps)};
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw SizeError("amplitude count " + std::to_string(dim) +
                        " is not a power of two >= 2");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    if (n > kMaxQubits) {
        throw SizeError("qubit count " + std::to_string(n) +
                        " exceeds the supported maximum");
    }
    return StateVector{n, std::move(amplitudes)};
}

Complex StateVector::amplitude(std::size_t basis_index) const {
    if (basis_index >= amps_.size()) {
        throw IndexError("basis index " + std::to_string(basis_index) +
                         " out of range [0, " + std::to_string(amps_.size()) +
                         ")");
    }
    return amps_[basis_index];
}

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= num_qubits_) {
        throw IndexError("qubit " + std::to_string(qubit) +
                         " out of range for " + std::to_string(num_qubits_) +
                         " qubits");
    }
}

void StateVector::check_pair(std::size_t j, std::size_t k) const {
    check_qubit(j);
    check_qubit(k);
    if (j == k) {
        throw ArgumentError("two-qubit operation on identical qubits " +
                            std::to_string(j));
    }
}

void StateVector::apply_u1(const GateU1 &gate) {
    check_qubit(gate.qubit);
    const Mat2 m =
        mul(exp_iy(gate.alpha), mul(exp_iz(gate.beta), exp_iy(gate.gamma)));
    for_each_pair(amps_.size(), gate.qubit, [&](std::size_t i0, std::size_t i1) {
        const Complex x0 = amps_[i0];
        const Complex x1 = amps_[i1];
        amps_[i0] = m[0] * x0 + m[1] * x1;
        amps_[i1] = m[2] * x0 + m[3] * x1;
    });
}

// XX, YY and ZZ commute and leave span{|00>,|11>} and span{|01>,|10>}
// invariant. On the first block XX = sx, YY = -sx, ZZ = 1; on the second
// XX = YY = sx, ZZ = -1. Each block is then e^{+-i eta} times a rotation
// cos(x) + i sin(x) sx with x = theta -+ phi.
void StateVector::apply_u2(const GateU2 &gate) {
    check_pair(gate.qubit_j, gate.qubit_k);
    const Complex phase_even = std::polar(1.0, gate.eta);
    const Complex phase_odd = std::polar(1.0, -gate.eta);
    const double even_angle = gate.theta - gate.phi;
    const double odd_angle = gate.theta + gate.phi;
    const Complex ea = phase_even * std::cos(even_angle);
    const Complex eb = phase_even * kI * std::sin(even_angle);
    const Complex oa = phase_odd * std::cos(odd_angle);
    const Complex ob = phase_odd * kI * std::sin(odd_angle);

    for_each_quad(amps_.size(), gate.qubit_j, gate.qubit_k,
                  [&](std::size_t i00, std::size_t i01, std::size_t i10,
                      std::size_t i11) {
                      const Complex x00 = amps_[i00];
                      const Complex x11 = amps_[i11];
                      amps_[i00] = ea * x00 + eb * x11;
                      amps_[i11] = eb * x00 + ea * x11;
                      const Complex x01 = amps_[i01];
                      const Complex x10 = amps_[i10];
                      amps_[i01] = oa * x01 + ob * x10;
                      amps_[i10] = ob * x01 + oa * x10;
                  });
}

void StateVector::apply_generator(const PauliGenerator &gen) {
    if (gen.is_two_qubit()) {
        check_pair(gen.qubit, gen.partner);
    } else {
        check_qubit(gen.qubit);
    }

    switch (gen.kind) {
    case PauliKind::Y:
        // Y|0> = i|1>, Y|1> = -i|0>
        for_each_pair(amps_.size(), gen.qubit,
                      [&](std::size_t i0, std::size_t i1) {
                          const Complex x0 = amps_[i0];
                          amps_[i0] = -kI * amps_[i1];
                          amps_[i1] = kI * x0;
                      });
        break;
    case PauliKind::Z:
        for_each_pair(amps_.size(), gen.qubit,
                      [&](std::size_t, std::size_t i1) { amps_[i1] = -amps_[i1]; });
        break;
    case PauliKind::XX:
        for_each_quad(amps_.size(), gen.qubit, gen.partner,
                      [&](std::size_t i00, std::size_t i01, std::size_t i10,
                          std::size_t i11) {
                          std::swap(amps_[i00], amps_[i11]);
                          std::swap(amps_[i01], amps_[i10]);
                      });
        break;
    case PauliKind::YY:
        for_each_quad(amps_.size(), gen.qubit, gen.partner,
                      [&](std::size_t i00, std::size_t i01, std::size_t i10,
                          std::size_t i11) {
                          const Complex x00 = amps_[i00];
                          amps_[i00] = -amps_[i11];
                          amps_[i11] = -x00;
                          std::swap(amps_[i01], amps_[i10]);
                      });
        break;
    case PauliKind::ZZ:
        for_each_quad(amps_.size(), gen.qubit, gen.partner,
                      [&](std::size_t, std::size_t i01, std::size_t i10,
                          std::size_t) {
                          amps_[i01] = -amps_[i01];
                          amps_[i10] = -amps_[i10];
                      });
        break;
    }
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> probs(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        probs[i] = std::norm(amps_[i]);
    }
    return probs;
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const Complex &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

Complex StateVector::inner(const StateVector &other) const {
    if (other.amps_.size() != amps_.size()) {
        throw DimensionError("inner product of statevectors with " +
                             std::to_string(amps_.size()) + " and " +
                             std::to_string(other.amps_.size()) +
                             " amplitudes");
    }
    Complex total{};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        total += std::conj(amps_[i]) * other.amps_[i];
    }
    return total;
}

StateVector apply_u1(StateVector state, const GateU1 &gate) {
    state.apply_u1(gate);
    return state;
}

StateVector apply_u2(StateVector state, const GateU2 &gate) {
    state.apply_u2(gate);
    return state;
}

StateVector apply_generator(StateVector state, const PauliGenerator &gen) {
    state.apply_generator(gen);
    return state;
}

GateU1 inverse(const GateU1 &gate) noexcept {
    return GateU1{gate.qubit, -gate.gamma, -gate.beta, -gate.alpha};
}

GateU2 inverse(const GateU2 &gate) noexcept {
    return GateU2{gate.qubit_j, gate.qubit_k, -gate.theta, -gate.phi, -gate.eta};
}

} // namespace qhybrid
