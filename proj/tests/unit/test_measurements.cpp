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
#include <doctest.h>

#include <random>

#include "relspace/measurements.hpp"
#include "relspace/oracle.hpp"
#include "relspace/samples.hpp"

using namespace relspace;

namespace {

GlobalState ladder_universe(std::size_t levels, std::span<const cplx> c, int d = 3) {
    ClockOptions o;
    o.ladder_levels = levels;
    return line_universe({d, d, kTwoPi, 2.0, 1.0, -1}, c, o);
}

const std::vector<cplx> kCoeffs{0.6, 0.48, 0.64};

} // namespace

TEST_CASE("orthogonal frames need a complete ladder") {
    const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, 0}, kCoeffs);
    CHECK_THROWS_AS(orthogonal_frames(g), std::invalid_argument);
    const auto f = orthogonal_frames(ladder_universe(4, kCoeffs));
    CHECK(f.orthogonal);
    CHECK(f.clock.D == 4);
    CHECK(f.rod.D == 3);
    CHECK_FALSE(povm_frames(ladder_universe(4, kCoeffs), 6, 5, 5).orthogonal);
}

TEST_CASE("single-time GPPT joint sums to one over rod and system") {
    const auto g = ladder_universe(4, kCoeffs);
    const auto f = orthogonal_frames(g);
    for (int m = 0; m < f.clock.D; ++m) {
        double total = 0.0;
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l < 3; ++l) {
                const auto s = gppt_single(g, f, {m, j, l});
                total += s.closed_form;
                REQUIRE(s.theta_average.has_value());
                CHECK(*s.theta_average == doctest::Approx(s.closed_form).epsilon(1e-10));
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("two-time protocols equal the constrained propagator") {
    std::mt19937_64 rng(31);
    for (int d : {2, 3}) {
        const auto c = random_unit_vector(rng, static_cast<std::size_t>(d));
        const auto g = ladder_universe(9, c, d);
        const auto f = orthogonal_frames(g);
        MemoryLayout lay;
        lay.times = {f.clock.point(2), f.clock.point(6)};
        const auto h = glm_build(g, f, lay);
        CHECK(glm_records(h) == 2);
        for (int j = 0; j < d; ++j) {
            for (int l2 = 0; l2 < d; ++l2) {
                const MeasurementEvent a{2, j, (j + 1) % d};
                const MeasurementEvent b{6, (j + 1) % d, l2};
                const double ref = propagator_constrained(g, f, a, b);
                const auto gp = gppt_two_time(g, f, a, b);
                const auto gl = glm_two_time_prob(h, f, a, b);
                CHECK(std::abs(gp.joint - ref) < 1e-10);
                CHECK(std::abs(gl.joint - ref) < 1e-10);
                CHECK(gp.conditioned == doctest::Approx(gp.joint * d * d));
            }
        }
    }
}

TEST_CASE("GLM single-time joint equals the GPPT closed form after the record") {
    const auto g = ladder_universe(4, kCoeffs);
    const auto f = orthogonal_frames(g);
    MemoryLayout lay;
    lay.times = {f.clock.point(1)};
    const auto h = glm_build(g, f, lay);
    for (int j = 0; j < 3; ++j) {
        for (int l = 0; l < 3; ++l) {
            const auto gl = glm_single_prob(h, f, f.clock.point(3), j, l);
            CHECK(gl.joint == doctest::Approx(gppt_single(g, f, {1, j, l}).closed_form).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(glm_single_prob(h, f, f.clock.point(0), 0, 0), std::invalid_argument);
}

TEST_CASE("memories stay ready before their record time") {
    const auto g = ladder_universe(4, kCoeffs);
    const auto f = orthogonal_frames(g);
    MemoryLayout lay;
    lay.times = {f.clock.point(2)};
    const auto h = glm_build(g, f, lay);
    const auto before = memory_marginal(h, f, f.clock.point(1), 0);
    CHECK(before.back() == doctest::Approx(1.0).epsilon(1e-12));
    const auto after = memory_marginal(h, f, f.clock.point(3), 0);
    CHECK(after.back() == doctest::Approx(0.0).epsilon(1e-12));
    double total = 0.0;
    for (double p : after) {
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("protocol argument validation") {
    const auto g = ladder_universe(4, kCoeffs);
    const auto f = orthogonal_frames(g);
    CHECK_THROWS_AS(gppt_two_time(g, f, {3, 0, 0}, {1, 0, 0}), std::invalid_argument);
    CHECK_NOTHROW(gppt_two_time(g, f, {2, 0, 0}, {2, 0, 0}));
    MemoryLayout back;
    back.times = {f.clock.point(2), f.clock.point(1)};
    CHECK_THROWS_AS(glm_build(g, f, back), std::invalid_argument);
    MemoryLayout three;
    three.times = {f.clock.point(0), f.clock.point(1), f.clock.point(2)};
    CHECK_THROWS_AS(glm_build(g, f, three), std::invalid_argument);
    const auto povm = povm_frames(g, 6, 5, 5);
    CHECK_THROWS_AS(gppt_two_time(g, povm, {0, 0, 0}, {1, 0, 0}), std::invalid_argument);
    CHECK(glm_records(glm_build(g, f, {})) == 0);
}
