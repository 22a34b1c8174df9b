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
#include "qhybrid/quantum_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

constexpr Complex kI{0.0, 1.0};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string{s.substr(first, last - first + 1)};
}

std::size_t parse_index(std::string_view text, std::string_view token) {
    std::size_t value = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw ArgumentError("malformed layout token '" + std::string{token} +
                            "'");
    }
    return value;
}

void require_qubit(std::size_t qubit, std::size_t n, std::string_view token) {
    if (qubit >= n) {
        throw IndexError("layout token '" + std::string{token} + "' uses qubit " +
                         std::to_string(qubit) + " but the register has " +
                         std::to_string(n) + " qubits");
    }
}

GateU1 u1_gate(const Slot &slot, std::span<const double, 3> p) {
    return GateU1{slot.qubit, p[0], p[1], p[2]};
}

GateU2 u2_gate(const Slot &slot, std::span<const double, 3> p) {
    return GateU2{slot.qubit, slot.partner, p[0], p[1], p[2]};
}

std::span<const double, 3> slot_params(std::span<const double> angles,
                                       std::size_t slot_index) {
    return angles.subspan(slot_index * CircuitLayout::kParamsPerSlot)
        .first<CircuitLayout::kParamsPerSlot>();
}

void apply_slot(StateVector &state, const Slot &slot,
                std::span<const double, 3> p) {
    if (slot.kind == SlotKind::U1) {
        state.apply_u1(u1_gate(slot, p));
    } else {
        state.apply_u2(u2_gate(slot, p));
    }
}

void apply_slot_inverse(StateVector &state, const Slot &slot,
                        std::span<const double, 3> p) {
    if (slot.kind == SlotKind::U1) {
        state.apply_u1(inverse(u1_gate(slot, p)));
    } else {
        state.apply_u2(inverse(u2_gate(slot, p)));
    }
}

PauliGenerator u2_generator(const Slot &slot, std::size_t offset) {
    static constexpr PauliKind kinds[] = {PauliKind::XX, PauliKind::YY,
                                          PauliKind::ZZ};
    return PauliGenerator{kinds[offset], slot.qubit, slot.partner};
}

// Applies the slot with its generator G (no factor i) inserted at `offset`.
// U1 = Ry(a) Rz(b) Ry(g): d/da puts Y after the slot, d/dg before it and
// d/db between the gamma and the (alpha, beta) parts. U2 generators commute
// with the slot and are placed after it.
void apply_slot_with_generator(StateVector &state, const Slot &slot,
                               std::span<const double, 3> p, std::size_t offset) {
    if (slot.kind == SlotKind::U2) {
        state.apply_u2(u2_gate(slot, p));
        state.apply_generator(u2_generator(slot, offset));
        return;
    }
    const PauliGenerator y{PauliKind::Y, slot.qubit, 0};
    const PauliGenerator z{PauliKind::Z, slot.qubit, 0};
    switch (offset) {
    case 0:
        state.apply_u1(u1_gate(slot, p));
        state.apply_generator(y);
        break;
    case 1:
        state.apply_u1(GateU1{slot.qubit, 0.0, 0.0, p[2]});
        state.apply_generator(z);
        state.apply_u1(GateU1{slot.qubit, p[0], p[1], 0.0});
        break;
    default:
        state.apply_generator(y);
        state.apply_u1(u1_gate(slot, p));
        break;
    }
}

void check_angles(const CircuitLayout &layout, std::span<const double> angles) {
    if (angles.size() != layout.num_params()) {
        throw DimensionError("circuit expects " +
                             std::to_string(layout.num_params()) +
                             " angles, got " + std::to_string(angles.size()));
    }
}

std::vector<std::size_t> selected_rows(std::size_t num_qubits,
                                       OutputSelection selection) {
    std::vector<std::size_t> rows(selection.count(num_qubits));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k] = k;
    }
    return rows;
}

// a_k = <k|W|0> and b_km = <k|W'_m|0> for the selected rows.
struct Overlaps {
    std::vector<Complex> a;
    std::vector<Complex> b; // rows x params, row-major
};

Overlaps overlaps_by_derivative_states(const CircuitLayout &layout,
                                       std::span<const double> angles,
                                       std::span<const std::size_t> rows) {
    const auto slots = layout.slots();
    const std::size_t params = layout.num_params();
    Overlaps out{std::vector<Complex>(rows.size()),
                 std::vector<Complex>(rows.size() * params)};

    StateVector prefix = StateVector::zero(layout.num_qubits());
    StateVector scratch = prefix;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        const auto p = slot_params(angles, s);
        for (std::size_t offset = 0; offset < CircuitLayout::kParamsPerSlot;
             ++offset) {
            scratch = prefix;
            apply_slot_with_generator(scratch, slots[s], p, offset);
            for (std::size_t t = s + 1; t < slots.size(); ++t) {
                apply_slot(scratch, slots[t], slot_params(angles, t));
            }
            const std::size_t m = s * CircuitLayout::kParamsPerSlot + offset;
            const auto amps = scratch.amplitudes();
            for (std::size_t r = 0; r < rows.size(); ++r) {
                out.b[r * params + m] = kI * amps[rows[r]];
            }
        }
        apply_slot(prefix, slots[s], p);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.a[r] = prefix.amplitudes()[rows[r]];
    }
    return out;
}

// Reverse sweep: psi walks back from W|0> and each bra lambda_k from |k>,
// both by inverse slots, so that at slot s we hold psi_{s+1} = U_s psi_s and
// lambda_s = (U_{S-1} ... U_{s+1})^dagger |k>.
Overlaps overlaps_by_adjoint(const CircuitLayout &layout,
                             std::span<const double> angles,
                             std::span<const std::size_t> rows) {
    const auto slots = layout.slots();
    const std::size_t n = layout.num_qubits();
    const std::size_t params = layout.num_params();
    Overlaps out{std::vector<Complex>(rows.size()),
                 std::vector<Complex>(rows.size() * params)};

    StateVector psi = prepare_state(layout, angles);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.a[r] = psi.amplitudes()[rows[r]];
    }
    std::vector<StateVector> bras;
    bras.reserve(rows.size());
    for (std::size_t k : rows) {
        bras.push_back(StateVector::basis(n, k));
    }

    StateVector scratch = psi;
    auto record = [&](std::size_t m, const PauliGenerator &gen) {
        scratch = psi;
        scratch.apply_generator(gen);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out.b[r * params + m] = kI * bras[r].inner(scratch);
        }
    };
    auto apply_to_all = [&](auto &&fn) {
        fn(psi);
        for (auto &bra : bras) {
            fn(bra);
        }
    };

    for (std::size_t s = slots.size(); s-- > 0;) {
        const Slot &slot = slots[s];
        const auto p = slot_params(angles, s);
        const std::size_t m0 = s * CircuitLayout::kParamsPerSlot;
        if (slot.kind == SlotKind::U2) {
            for (std::size_t offset = 0; offset < 3; ++offset) {
                record(m0 + offset, u2_generator(slot, offset));
            }
            apply_to_all([&](StateVector &v) { apply_slot_inverse(v, slot, p); });
            continue;
        }
        const PauliGenerator y{PauliKind::Y, slot.qubit, 0};
        const PauliGenerator z{PauliKind::Z, slot.qubit, 0};
        record(m0, y);
        apply_to_all([&](StateVector &v) {
            v.apply_u1(GateU1{slot.qubit, -p[0], 0.0, 0.0});
        });
        record(m0 + 1, z);
        apply_to_all([&](StateVector &v) {
            v.apply_u1(GateU1{slot.qubit, -p[2], -p[1], 0.0});
        });
        record(m0 + 2, y);
    }
    return out;
}

Overlaps compute_overlaps(const CircuitLayout &layout,
                          std::span<const double> angles,
                          OutputSelection selection, GradientMethod method) {
    check_angles(layout, angles);
    const auto rows = selected_rows(layout.num_qubits(), selection);
    if (method == GradientMethod::Auto) {
        // Gate applications: the sweep moves Q1 + 1 vectors through every
        // slot; the forward variant replays on average half the circuit per
        // parameter.
        const double s = static_cast<double>(layout.slots().size());
        const double q = static_cast<double>(rows.size());
        const double adjoint_cost = s * (2.0 * q + 2.0);
        const double forward_cost = 1.5 * s * (s + 1.0) + s;
        method = adjoint_cost <= forward_cost ? GradientMethod::Adjoint
                                              : GradientMethod::DerivativeStates;
    }
    return method == GradientMethod::Adjoint
               ? overlaps_by_adjoint(layout, angles, rows)
               : overlaps_by_derivative_states(layout, angles, rows);
}

} // namespace

CircuitLayout CircuitLayout::build(std::size_t num_qubits,
                                   std::span<const std::string> tokens) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw SizeError("layout register size " + std::to_string(num_qubits) +
                        " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (tokens.empty()) {
        throw ArgumentError("layout has no gates");
    }
    std::vector<Slot> slots;
    for (const auto &raw : tokens) {
        const std::string token = trim(raw);
        if (token == "u1-all") {
            for (std::size_t q = 0; q < num_qubits; ++q) {
                slots.push_back(Slot{SlotKind::U1, q, 0});
            }
        } else if (token == "u2-even" || token == "u2-odd") {
            const std::size_t start = token == "u2-even" ? 0 : 1;
            if (num_qubits < start + 2) {
                throw ArgumentError("layout token '" + token +
                                    "' yields an empty layer on " +
                                    std::to_string(num_qubits) + " qubits");
            }
            for (std::size_t q = start; q + 1 < num_qubits; q += 2) {
                slots.push_back(Slot{SlotKind::U2, q, q + 1});
            }
        } else if (token.starts_with("u1@")) {
            const std::size_t q = parse_index(std::string_view{token}.substr(3), token);
            require_qubit(q, num_qubits, token);
            slots.push_back(Slot{SlotKind::U1, q, 0});
        } else if (token.starts_with("u2@")) {
            const std::string_view body = std::string_view{token}.substr(3);
            const auto colon = body.find(':');
            if (colon == std::string_view::npos) {
                throw ArgumentError("malformed layout token '" + token + "'");
            }
            const std::size_t j = parse_index(body.substr(0, colon), token);
            const std::size_t k = parse_index(body.substr(colon + 1), token);
            require_qubit(j, num_qubits, token);
            require_qubit(k, num_qubits, token);
            if (j == k) {
                throw ArgumentError("layout token '" + token +
                                    "' pairs a qubit with itself");
            }
            slots.push_back(Slot{SlotKind::U2, j, k});
        } else {
            throw ArgumentError("unknown layout token '" + token + "'");
        }
    }
    return CircuitLayout{num_qubits, std::move(slots)};
}

CircuitLayout CircuitLayout::parse(std::size_t num_qubits,
                                   std::string_view tokens) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= tokens.size()) {
        const auto comma = tokens.find(',', start);
        const auto end = comma == std::string_view::npos ? tokens.size() : comma;
        parts.push_back(trim(tokens.substr(start, end - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (parts.size() == 1 && parts.front().empty()) {
        parts.clear();
    }
    return build(num_qubits, parts);
}

const Slot &CircuitLayout::slot_of(std::size_t param_index) const {
    if (param_index >= num_params()) {
        throw IndexError("parameter " + std::to_string(param_index) +
                         " out of range [0, " + std::to_string(num_params()) +
                         ")");
    }
    return slots_[param_index / kParamsPerSlot];
}

OutputMode parse_output_mode(std::string_view text) {
    if (text == "full") {
        return OutputMode::Full;
    }
    if (text == "min") {
        return OutputMode::Min;
    }
    throw ArgumentError("output selection must be 'full' or 'min', got '" +
                        std::string{text} + "'");
}

std::string_view to_string(OutputMode mode) noexcept {
    return mode == OutputMode::Full ? "full" : "min";
}

StateVector prepare_state(const CircuitLayout &layout,
                          std::span<const double> angles) {
    check_angles(layout, angles);
    StateVector state = StateVector::zero(layout.num_qubits());
    const auto slots = layout.slots();
    for (std::size_t s = 0; s < slots.size(); ++s) {
        apply_slot(state, slots[s], slot_params(angles, s));
    }
    return state;
}

std::vector<double> forward(const CircuitLayout &layout,
                            std::span<const double> angles,
                            OutputSelection selection) {
    const StateVector state = prepare_state(layout, angles);
    if (selection.mode == OutputMode::Min) {
        return {std::norm(state.amplitudes()[0])};
    }
    return state.probabilities();
}

StateVector derivative_state(const CircuitLayout &layout,
                             std::span<const double> angles,
                             std::size_t param_index) {
    check_angles(layout, angles);
    (void)layout.slot_of(param_index); // range check
    const std::size_t target = param_index / CircuitLayout::kParamsPerSlot;
    const std::size_t offset = param_index % CircuitLayout::kParamsPerSlot;
    StateVector state = StateVector::zero(layout.num_qubits());
    const auto slots = layout.slots();
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (s == target) {
            apply_slot_with_generator(state, slots[s], slot_params(angles, s),
                                      offset);
        } else {
            apply_slot(state, slots[s], slot_params(angles, s));
        }
    }
    for (Complex &amp : state.amplitudes()) {
        amp *= kI;
    }
    return state;
}

GradientMatrix gradient_exact(const CircuitLayout &layout,
                              std::span<const double> angles,
                              OutputSelection selection, GradientMethod method) {
    const Overlaps ov = compute_overlaps(layout, angles, selection, method);
    const std::size_t params = layout.num_params();
    GradientMatrix grad(ov.a.size(), params);
    for (std::size_t r = 0; r < ov.a.size(); ++r) {
        for (std::size_t m = 0; m < params; ++m) {
            grad(r, m) = 2.0 * (std::conj(ov.a[r]) * ov.b[r * params + m]).real();
        }
    }
    return grad;
}

// exp(i (w + pi/2) G) = exp(i w G) (i G) for any Pauli string G, and every
// generator commutes with the exponential it sits next to, so the shifted
// circuit reproduces the generator insertion exactly for U1 and U2 slots.
std::vector<double> shifted_angles(const CircuitLayout &layout,
                                   std::span<const double> angles,
                                   std::size_t param_index) {
    check_angles(layout, angles);
    (void)layout.slot_of(param_index); // range check
    std::vector<double> shifted(angles.begin(), angles.end());
    shifted[param_index] += std::numbers::pi / 2.0;
    return shifted;
}

HadamardEstimates exact_overlaps(const CircuitLayout &layout,
                                 std::span<const double> angles,
                                 OutputSelection selection) {
    const Overlaps ov =
        compute_overlaps(layout, angles, selection, GradientMethod::Auto);
    HadamardEstimates est;
    est.rows = ov.a.size();
    est.cols = layout.num_params();
    est.r.resize(est.rows);
    est.i.resize(est.rows);
    for (std::size_t k = 0; k < est.rows; ++k) {
        // <0|W^dagger|k> = conj(<k|W|0>)
        est.r[k] = ov.a[k].real();
        est.i[k] = -ov.a[k].imag();
    }
    est.r_shift.resize(ov.b.size());
    est.i_shift.resize(ov.b.size());
    for (std::size_t idx = 0; idx < ov.b.size(); ++idx) {
        est.r_shift[idx] = ov.b[idx].real();
        est.i_shift[idx] = ov.b[idx].imag();
    }
    return est;
}

HadamardEstimates sample_overlaps(const HadamardEstimates &exact,
                                  std::uint64_t shots, std::mt19937_64 &rng) {
    if (shots == 0) {
        throw ArgumentError("shot count must be at least 1");
    }
    const double inv_shots = 1.0 / static_cast<double>(shots);
    auto draw = [&](double value) {
        const double p = std::clamp(0.5 * (1.0 + value), 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> dist(shots, p);
        const double f = static_cast<double>(dist(rng)) * inv_shots;
        return 2.0 * f - 1.0;
    };
    HadamardEstimates est = exact;
    est.shots_per_estimate = shots;
    for (double &v : est.r) {
        v = draw(v);
    }
    for (double &v : est.i) {
        v = draw(v);
    }
    for (double &v : est.r_shift) {
        v = draw(v);
    }
    for (double &v : est.i_shift) {
        v = draw(v);
    }
    return est;
}

GradientMatrix combine_overlaps(const HadamardEstimates &est) {
    GradientMatrix grad(est.rows, est.cols);
    for (std::size_t k = 0; k < est.rows; ++k) {
        for (std::size_t m = 0; m < est.cols; ++m) {
            const std::size_t idx = k * est.cols + m;
            grad(k, m) = 2.0 * (est.r[k] * est.r_shift[idx] -
                                est.i[k] * est.i_shift[idx]);
        }
    }
    return grad;
}

GradientMatrix gradient_sampled(const CircuitLayout &layout,
                                std::span<const double> angles,
                                OutputSelection selection, std::uint64_t shots,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return combine_overlaps(
        sample_overlaps(exact_overlaps(layout, angles, selection), shots, rng));
}

std::uint64_t circuit_count(std::size_t num_qubits, std::size_t num_params,
                            std::size_t num_outputs) {
    const std::uint64_t m = num_params;
    const std::uint64_t full = (std::uint64_t{1} << num_qubits) * m;
    const std::uint64_t hadamard = 2 * static_cast<std::uint64_t>(num_outputs) * (m + 1);
    return std::min(full, hadamard);
}

std::uint64_t circuit_count(const CircuitLayout &layout,
                            OutputSelection selection) {
    return circuit_count(layout.num_qubits(), layout.num_params(),
                         selection.count(layout.num_qubits()));
}

std::uint64_t sample_bound(const ComplexityQuery &query) {
    if (!(query.epsilon > 0.0)) {
        throw ArgumentError("epsilon must be positive");
    }
    const double exact = static_cast<double>(query.num_outputs) *
                         static_cast<double>(query.num_params) *
                         query.max_variance / (query.epsilon * query.epsilon);
    // 0.1^2 is not representable; snap values within rounding of an integer.
    const double nearest = std::round(exact);
    if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::ceil(exact));
}

} // namespace qhybrid
