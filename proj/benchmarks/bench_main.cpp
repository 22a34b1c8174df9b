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
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qhybrid/classical_net.hpp"
#include "qhybrid/quantum_model.hpp"
#include "qhybrid/statevector.hpp"

namespace {

using namespace qhybrid;

std::vector<double> angles(std::size_t m) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.0, 6.283185307179586);
    std::vector<double> w(m);
    for (auto &x : w) {
        x = d(rng);
    }
    return w;
}

void BM_ApplyU1(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto psi = StateVector::zero(n);
    const GateU1 gate{n / 2, 0.3, 0.7, 1.1};
    for (auto _ : state) {
        psi.apply_u1(gate);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(psi.size()));
}
BENCHMARK(BM_ApplyU1)->Arg(4)->Arg(8)->Arg(12);

void BM_ApplyU2(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto psi = StateVector::zero(n);
    const GateU2 gate{0, n - 1, 0.3, 0.7, 1.1};
    for (auto _ : state) {
        psi.apply_u2(gate);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(psi.size()));
}
BENCHMARK(BM_ApplyU2)->Arg(4)->Arg(8)->Arg(12);

void BM_GradientExact(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto method = static_cast<GradientMethod>(state.range(1));
    const auto layout = CircuitLayout::parse(n, "u1-all, u2-even, u1-all, u2-odd, u1-all");
    const auto w = angles(layout.num_params());
    const OutputSelection sel{OutputMode::Full};
    for (auto _ : state) {
        benchmark::DoNotOptimize(gradient_exact(layout, w, sel, method));
    }
}
BENCHMARK(BM_GradientExact)
    ->ArgsProduct({{4, 6, 8, 10}, {static_cast<int>(GradientMethod::Adjoint),
                                  static_cast<int>(GradientMethod::DerivativeStates)}});

void BM_NetworkForward(benchmark::State &state) {
    std::mt19937_64 rng(2);
    const std::size_t widths[] = {784, 15, 2};
    const Activation acts[] = {Activation::Relu, Activation::Identity};
    const Network net = Network::make(widths, acts, rng);
    Matrix x(static_cast<std::size_t>(state.range(0)), 784);
    for (auto &v : x.data()) {
        v = 0.5;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(x));
    }
}
BENCHMARK(BM_NetworkForward)->Arg(16)->Arg(512);

} // namespace

BENCHMARK_MAIN();
