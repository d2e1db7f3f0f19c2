// Copyright 2026 The relspace Authors

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

#include "relspace/measurements.hpp"
#include "relspace/oracle.hpp"
#include "relspace/oscillator.hpp"
#include "relspace/relational.hpp"
#include "relspace/samples.hpp"

using namespace relspace;

namespace {

const std::vector<cplx> kCoeffs{0.6, 0.48, 0.64};

void BM_ConditionalGrid(benchmark::State &state) {
    const int D = static_cast<int>(state.range(0));
    const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, -1}, kCoeffs);
    const auto grid = FrameGrid::discrete(D, 0.0, kTwoPi);
    const auto clk = FrameGrid::discrete(D, 0.0, g.clock->T);
    for (auto _ : state) {
        double acc = 0.0;
        for (int m = 0; m < D; ++m) {
            for (int l = 0; l < D; ++l) {
                acc += conditional_prob_discrete(g, {grid, 0, grid, l, clk, m});
            }
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * D * D);
}
BENCHMARK(BM_ConditionalGrid)->Arg(16)->Arg(64);

void BM_BayesOracleDense(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    const auto g = line_universe({d, d, kTwoPi, 2.0, 1.0, 0},
                                 random_unit_vector(rng, static_cast<std::size_t>(d)));
    const auto grid = FrameGrid::discrete(d + 1, 0.0, kTwoPi);
    const auto clk = default_clock_grid(*g.clock);
    const std::array<Reading, 2> given{Reading::rod(grid, grid.point(1)),
                                       Reading::clock(clk, clk.point(1))};
    const std::array<Reading, 1> out{Reading::system(grid, grid.point(2))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(bayes_conditional_dense(g, given, out));
    }
}
BENCHMARK(BM_BayesOracleDense)->Arg(3)->Arg(6);

void BM_ConditionalSparse(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    const auto g = line_universe({d, d, kTwoPi, 2.0, 1.0, 0},
                                 random_unit_vector(rng, static_cast<std::size_t>(d)));
    const auto grid = FrameGrid::discrete(d + 1, 0.0, kTwoPi);
    const auto clk = default_clock_grid(*g.clock);
    const std::array<Reading, 2> given{Reading::rod(grid, grid.point(1)),
                                       Reading::clock(clk, clk.point(1))};
    const std::array<Reading, 1> out{Reading::system(grid, grid.point(2))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(conditional_probability(g, given, out));
    }
}
BENCHMARK(BM_ConditionalSparse)->Arg(3)->Arg(6);

void BM_GlmBuild(benchmark::State &state) {
    ClockOptions o;
    o.ladder_levels = static_cast<std::size_t>(state.range(0));
    const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, -1}, kCoeffs, o);
    const auto f = orthogonal_frames(g);
    MemoryLayout lay;
    lay.times = {f.clock.point(1), f.clock.point(3)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(glm_build(g, f, lay));
    }
}
BENCHMARK(BM_GlmBuild)->Arg(4)->Arg(9);

void BM_PropagatorOracle(benchmark::State &state) {
    ClockOptions o;
    o.ladder_levels = 9;
    const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, -1}, kCoeffs, o);
    const auto f = orthogonal_frames(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagator_constrained(g, f, {1, 0, 1}, {5, 1, 2}));
    }
}
BENCHMARK(BM_PropagatorOracle);

void BM_SpeedLimitReport(benchmark::State &state) {
    std::mt19937_64 rng(9);
    const auto g = random_line_universe(rng, 6, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(speed_limit_report(g));
    }
}
BENCHMARK(BM_SpeedLimitReport);

void BM_OscillatorUniverse(benchmark::State &state) {
    OscillatorParams p;
    p.trunc = static_cast<std::size_t>(state.range(0));
    p.quad.points = 257;
    for (auto _ : state) {
        benchmark::DoNotOptimize(oscillator_universe(p));
    }
}
BENCHMARK(BM_OscillatorUniverse)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
