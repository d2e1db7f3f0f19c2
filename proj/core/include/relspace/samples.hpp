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
/**
 * @file
 * Seeded families of small universes used by the property suites.
 */

#pragma once

#include <random>
#include <span>
#include <vector>

#include "relspace/universe.hpp"

namespace relspace {

/// One-axis free-particle universe. The system ladder starts at
/// sys_offset * 2 pi/L and the rod ladder ends at minus that value, so every
/// system level has a partner.
struct LineSpec {
    int d_rod = 3;
    int d_sys = 3;
    double L = kTwoPi;
    double M = 2.0;
    double m = 1.0;
    int sys_offset = 0;
};

AxisPair line_axis(const LineSpec &s);

GlobalState line_universe(const LineSpec &s, std::span<const cplx> coeffs,
                          const ClockOptions &opts = {});

/// Random dimensions up to the given bounds (d_sys <= d_rod), a random
/// period, masses from a small rational set, and Gaussian coefficients.
GlobalState random_line_universe(std::mt19937_64 &rng, int max_rod, int max_sys,
                                 bool real_only = false,
                                 const ClockOptions &opts = {});

// Equal-weight pair of system levels with distinct kinetic energy and a random
// relative phase. Such states reach an orthogonal state at t = pi / |gap|.
std::vector<cplx> random_two_level(std::mt19937_64 &rng, int d_sys, int sys_offset);

GlobalState random_two_level_universe(std::mt19937_64 &rng, int max_rod, int max_sys,
                                      const ClockOptions &opts = {});

} // namespace relspace
