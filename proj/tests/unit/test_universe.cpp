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

#include "relspace/oscillator.hpp"
#include "relspace/samples.hpp"
#include "relspace/universe.hpp"

using namespace relspace;

TEST_CASE("dispersion relations") {
    CHECK(Dispersion::free(2.0)(1.5) == doctest::Approx(1.5 * 1.5 / 4.0));
    CHECK(Dispersion::relativistic(1.0, 1)(0.75) == doctest::Approx(1.25));
    CHECK(Dispersion::relativistic(1.0, -1)(0.75) == doctest::Approx(-1.25));
    const std::array<double, 3> p{1.0, 2.0, 2.0};
    CHECK(Dispersion::free(1.0)(p) == doctest::Approx(4.5));
    CHECK(Dispersion::none()(p) == 0.0);
}

TEST_CASE("double-constrained line universes satisfy both constraints") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_line_universe(rng, 6, 4);
        CHECK(g.report.max() < 1e-12);
        CHECK(g.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g.dense().norm() == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(g.clock.has_value());
        CHECK(g.factors[g.require(Role::Clock)].dim() == g.clock->d());
    }
}

TEST_CASE("momentum-only universes carry no clock") {
    const auto rod = momentum_spectrum(3, -2.0, kTwoPi);
    const auto sys = momentum_spectrum(3, 0.0, kTwoPi);
    const std::vector<cplx> c{0.6, 0.0, 0.8};
    const auto g = momentum_constrained_state(rod, sys, c);
    CHECK_FALSE(g.slot(Role::Clock).has_value());
    CHECK(g.report.max() < 1e-12);
    CHECK(g.terms.size() == 2);
}

TEST_CASE("constructors reject unnormalized or unmatched coefficients") {
    const std::vector<cplx> bad{1.0, 1.0, 0.0};
    CHECK_THROWS_AS(line_universe({}, bad), std::invalid_argument);
    const std::vector<cplx> c{1.0, 0.0, 0.0};
    CHECK_THROWS_AS(line_universe({2, 3, kTwoPi, 2.0, 1.0, 0}, c), std::invalid_argument);
}

TEST_CASE("degenerate clock levels are merged into one factor level") {
    const std::vector<cplx> c{0.6, 0.48, 0.64};
    const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, -1}, c);
    CHECK(g.clock->d() == 2);
    CHECK(g.terms.size() == 3);
}

TEST_CASE("clock ladder pads unoccupied levels") {
    ClockOptions o;
    o.ladder_levels = 5;
    const std::vector<cplx> c{0.6, 0.48, 0.64};
    const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, -1}, c, o);
    CHECK(g.clock->d() == 5);
    CHECK(g.clock->equally_spaced());
    CHECK(g.report.max() < 1e-12);
}

TEST_CASE("3+1 universes satisfy the vector constraints") {
    std::mt19937_64 rng(12);
    const auto ax = line_axis({2, 2, 3.0, 2.0, 1.0, 0});
    const std::vector<AxisPair> axes(3, ax);
    const auto g = universe_3plus1(axes, Dispersion::free(2.0), Dispersion::free(1.0),
                                   random_unit_vector(rng, 8));
    CHECK(g.axes() == 3);
    CHECK(g.slots(Role::Rod).size() == 3);
    CHECK(g.report.max() < 1e-12);
    CHECK(g.report.value("momentum[2]").has_value());
}

TEST_CASE("a clock carrying momentum admits exact solutions") {
    const MomentumClock clock{{0.0, 1.0}, {-0.75, -0.25}};
    const auto res = nonzero_clock_momentum_state(
        clock, momentum_spectrum(4, -2.0, kTwoPi), momentum_spectrum(3, 0.0, kTwoPi),
        Dispersion::free(2.0), Dispersion::free(1.0));
    REQUIRE(res.state.has_value());
    CHECK_FALSE(res.solutions.empty());
    CHECK(res.state->report.max() < 1e-12);
    // Residuals are listed for every searched (clock, rod, system) triple.
    for (const auto &[a, b, c] : res.solutions) {
        const std::size_t i = (a * 4 + b) * 3 + c;
        CHECK(res.momentum_residuals.at(i) < 1e-12);
        CHECK(res.energy_residuals.at(i) < 1e-12);
    }
}

TEST_CASE("engineered clock-momentum triple gives a one-term state") {
    // p_C = 1, p_R = -2, p_S = 1; E_R = 4/4, E_S = 1/2, so the clock supplies -3/2.
    const MomentumClock clock{{1.0}, {-1.5}};
    const auto res = nonzero_clock_momentum_state(
        clock, momentum_spectrum(4, -2.0, kTwoPi), momentum_spectrum(3, 0.0, kTwoPi),
        Dispersion::free(2.0), Dispersion::free(1.0));
    REQUIRE(res.state.has_value());
    CHECK(res.solutions.size() == 1);
    CHECK(res.state->terms.size() == 1);
    CHECK(res.state->report.max() < 1e-12);
}

TEST_CASE("incompatible clock momenta give an empty report") {
    const MomentumClock clock{{0.5}, {-1.0}};
    const auto res = nonzero_clock_momentum_state(
        clock, momentum_spectrum(3, -1.0, kTwoPi), momentum_spectrum(3, -1.0, kTwoPi),
        Dispersion::free(2.0), Dispersion::free(1.0));
    CHECK_FALSE(res.state.has_value());
    CHECK(res.solutions.empty());
    CHECK(res.momentum_residuals.size() == 9);
    CHECK(res.energy_residuals.size() == 9);
}

TEST_CASE("oscillator universe obeys the energy constraint") {
    OscillatorParams p;
    p.M = 2.0;
    p.trunc = 8;
    p.quad.points = 129;
    const auto u = oscillator_universe(p);
    CHECK(*u.state.report.value("energy") < 1e-8);
    CHECK(u.window_leakage < 1e-10);
    CHECK(u.quadrature_delta < 1e-8);
    CHECK(u.state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    OscillatorParams bad = p;
    bad.trunc = 0;
    CHECK_THROWS_AS(oscillator_universe(bad), std::invalid_argument);
}

TEST_CASE("oscillator Hamiltonian is diagonal with ladder spacing omega") {
    const CMatrix h = oscillator_hamiltonian(6, 1.5, 0.8);
    for (Eigen::Index k = 0; k < 6; ++k) {
        CHECK(h(k, k).real() == doctest::Approx(0.8 * (static_cast<double>(k) + 0.5)));
    }
    const CMatrix x = oscillator_position_operator(6, 1.5, 0.8);
    CHECK(hermiticity_defect(x) < 1e-15);
}
