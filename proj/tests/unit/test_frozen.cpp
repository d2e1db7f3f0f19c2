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
// Reference values from tests/oracles/frozen_values.py (dense numpy
// construction from the ket conventions, independent of this library).
#include <doctest.h>

#include "relspace/measurements.hpp"
#include "relspace/oscillator.hpp"
#include "relspace/relational.hpp"
#include "relspace/samples.hpp"

using namespace relspace;

namespace {

const std::vector<cplx> kCoeffs{0.6, 0.48, 0.64};
const LineSpec kSpec{3, 3, kTwoPi, 2.0, 1.0, -1};

} // namespace

TEST_CASE("discrete conditional distribution on the three-level universe") {
    const std::array<double, 8> expected{
        0.025605887450304562, 0.048199999999999986, 0.11578251095944177, 0.053000000000000019,
        0.03239411254969541,  0.20179999999999998,  0.32621748904055831, 0.19700000000000004};
    const auto g = line_universe(kSpec, kCoeffs);
    const auto grid = FrameGrid::discrete(8, 0.0, kTwoPi);
    const auto clk = FrameGrid::discrete(8, 0.0, g.clock->T);
    for (int l = 0; l < 8; ++l) {
        CHECK(conditional_prob_discrete(g, {grid, 2, grid, l, clk, 3}) ==
              doctest::Approx(expected[static_cast<std::size_t>(l)]).epsilon(1e-13));
    }
}

TEST_CASE("conditional density on the three-level universe") {
    const auto g = line_universe(kSpec, kCoeffs);
    CHECK(conditional_density(g, 0.3, 1.1, 1.7) ==
          doctest::Approx(0.070260722392816818).epsilon(1e-12));
}

TEST_CASE("closed three-level form against the published expression") {
    CHECK(closed_form_3level(0.6, 0.48, 0.64, kTwoPi, 2.0, 1.0, 0.7, 0.4) ==
          doctest::Approx(0.83044457491213985).epsilon(1e-14));
}

TEST_CASE("two-time propagator values") {
    ClockOptions o;
    o.ladder_levels = 9;
    const auto g = line_universe(kSpec, kCoeffs, o);
    const auto f = orthogonal_frames(g);
    REQUIRE(f.clock.period == doctest::Approx(kTwoPi / 0.75));
    CHECK(gppt_two_time(g, f, {1, 0, 1}, {5, 1, 2}).joint ==
          doctest::Approx(0.015323821195757604).epsilon(1e-12));
    CHECK(gppt_two_time(g, f, {1, 0, 0}, {5, 2, 1}).joint ==
          doctest::Approx(0.047893644957676701).epsilon(1e-12));
}

TEST_CASE("oscillator momentum eigenfunction") {
    const cplx v = oscillator_momentum_wavefunction(3, 2.0, 0.7, 0.9);
    CHECK(std::abs(v.real()) < 1e-14);
    CHECK(v.imag() == doctest::Approx(-0.4184608838627259).epsilon(1e-12));
}
