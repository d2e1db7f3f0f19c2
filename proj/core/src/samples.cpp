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
#include "relspace/samples.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace relspace {

AxisPair line_axis(const LineSpec &s) {
    if (s.d_sys > s.d_rod) {
        throw std::invalid_argument("line universe needs d_sys <= d_rod");
    }
    const double k = kTwoPi / s.L;
    const double p0 = s.sys_offset * k;
    return {momentum_spectrum(s.d_rod, -p0 - (s.d_rod - 1) * k, s.L),
            momentum_spectrum(s.d_sys, p0, s.L)};
}

GlobalState line_universe(const LineSpec &s, std::span<const cplx> coeffs,
                          const ClockOptions &opts) {
    const auto ax = line_axis(s);
    return double_constrained_state(Dispersion::free(s.M), Dispersion::free(s.m),
                                    ax.rod, ax.sys, coeffs, opts);
}

GlobalState random_line_universe(std::mt19937_64 &rng, int max_rod, int max_sys,
                                 bool real_only, const ClockOptions &opts) {
    static constexpr std::array<double, 4> masses{1.0, 2.0, 3.0, 4.0};
    LineSpec s;
    s.d_sys = std::uniform_int_distribution<int>(2, max_sys)(rng);
    s.d_rod = std::uniform_int_distribution<int>(s.d_sys, std::max(s.d_sys, max_rod))(rng);
    s.L = std::uniform_real_distribution<double>(1.0, 10.0)(rng);
    s.M = masses[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
    s.m = masses[std::uniform_int_distribution<std::size_t>(0, 1)(rng)];
    s.sys_offset = std::uniform_int_distribution<int>(-1, 1)(rng);
    const auto c = random_unit_vector(rng, static_cast<std::size_t>(s.d_sys), real_only);
    return line_universe(s, c, opts);
}

std::vector<cplx> random_two_level(std::mt19937_64 &rng, int d_sys, int sys_offset) {
    if (d_sys < 2) {
        throw std::invalid_argument("two-level state needs at least two system levels");
    }
    std::uniform_int_distribution<int> pick(0, d_sys - 1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const int a = pick(rng);
        const int b = pick(rng);
        if (std::abs(sys_offset + a) == std::abs(sys_offset + b)) {
            continue;
        }
        const double phase = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
        std::vector<cplx> c(static_cast<std::size_t>(d_sys), cplx{0.0, 0.0});
        c[static_cast<std::size_t>(a)] = cplx{1.0 / std::sqrt(2.0), 0.0};
        c[static_cast<std::size_t>(b)] = std::polar(1.0 / std::sqrt(2.0), phase);
        return c;
    }
    throw std::invalid_argument("no pair of system levels with distinct energy");
}

GlobalState random_two_level_universe(std::mt19937_64 &rng, int max_rod, int max_sys,
                                      const ClockOptions &opts) {
    static constexpr std::array<double, 4> masses{1.0, 2.0, 3.0, 4.0};
    LineSpec s;
    s.d_sys = std::uniform_int_distribution<int>(2, max_sys)(rng);
    s.d_rod = std::uniform_int_distribution<int>(s.d_sys, std::max(s.d_sys, max_rod))(rng);
    s.L = std::uniform_real_distribution<double>(1.0, 10.0)(rng);
    s.M = masses[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
    s.m = masses[std::uniform_int_distribution<std::size_t>(0, 1)(rng)];
    s.sys_offset = std::uniform_int_distribution<int>(-1, 1)(rng);
    const auto c = random_two_level(rng, s.d_sys, s.sys_offset);
    return line_universe(s, c, opts);
}

} // namespace relspace
