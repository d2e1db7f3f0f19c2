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

#include <cmath>
#include <numbers>
#include <random>

#include "relspace/frames.hpp"

using namespace relspace;

TEST_CASE("momentum spectra are equally spaced ladders") {
    const auto s = momentum_spectrum(4, -1.5, 3.0);
    REQUIRE(s.values.size() == 4);
    for (std::size_t k = 1; k < 4; ++k) {
        CHECK(s.values[k] - s.values[k - 1] == doctest::Approx(kTwoPi / 3.0).epsilon(1e-14));
    }
    CHECK(s.find(s.values[2]).value() == 2);
    CHECK_FALSE(s.find(s.values[2] + 0.1).has_value());
    CHECK_THROWS_AS(momentum_spectrum(0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(momentum_spectrum(2, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("frame grids index, wrap and reject bad input") {
    const auto g = FrameGrid::discrete(5, 0.5, 10.0);
    CHECK(g.point(3) == doctest::Approx(6.5));
    CHECK(g.index_of(6.5) == 3);
    CHECK(g.index_of(g.wrap(16.5)) == 3);
    CHECK(g.wrap(-1.0) == doctest::Approx(9.0));
    CHECK_THROWS_AS((void)g.point(5), std::out_of_range);
    CHECK_THROWS_AS((void)g.index_of(1.0), std::out_of_range);
    CHECK_THROWS_AS(FrameGrid::discrete(0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FrameGrid::discrete(3, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)FrameGrid::interval(0.0, 1.0).point(0), std::logic_error);
}

TEST_CASE("position frames resolve the identity for every D >= d") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int d = 1; d <= 6; ++d) {
        for (int D = d; D <= 12; ++D) {
            const auto s = momentum_spectrum(d, u(rng), 2.0 + u(rng));
            const auto g = FrameGrid::discrete(D, u(rng), s.L);
            CHECK(identity_residual(s, g) < 1e-12);
            CHECK(delta_sum_residual(s, g) < 1e-12);
        }
    }
    const auto s = momentum_spectrum(4, 0.0, 1.0);
    CHECK_THROWS_AS(identity_residual(s, FrameGrid::discrete(3, 0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("D = d frame states are orthonormal, D > d are not") {
    const auto s = momentum_spectrum(3, -1.0, kTwoPi);
    for (auto sign : {PhaseSign::Standard, PhaseSign::Mirrored}) {
        const auto g = FrameGrid::discrete(3, 0.0, kTwoPi);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const cplx ip = inner(frame_state_discrete(s, g, a, sign),
                                      frame_state_discrete(s, g, b, sign));
                CHECK(std::abs(ip - cplx{a == b ? 1.0 : 0.0, 0.0}) < 1e-14);
            }
        }
    }
    const auto over = FrameGrid::discrete(5, 0.0, kTwoPi);
    const cplx ip = inner(frame_state_discrete(s, over, 0), frame_state_discrete(s, over, 1));
    CHECK(std::abs(ip) > 1e-3);
}

TEST_CASE("mirrored and standard frame kets are complex conjugates") {
    const auto s = momentum_spectrum(4, -2.0, 3.0);
    const auto a = frame_state_continuous(s, 0.7, 0.0, PhaseSign::Standard);
    const auto b = frame_state_continuous(s, 0.7, 0.0, PhaseSign::Mirrored);
    CHECK((a.amplitudes().conjugate() - b.amplitudes()).norm() < 1e-15);
}

TEST_CASE("rational clocks reconstruct the level multiples") {
    const std::array<Rational, 3> e{Rational(-1, 2), Rational(0), Rational(1)};
    const auto c = clock_from_energies(e);
    CHECK(c.commensurate);
    CHECK(c.r == std::vector<std::int64_t>{0, 1, 3});
    CHECK(c.T == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
    CHECK_FALSE(c.equally_spaced());
    for (int D = 4; D <= 12; ++D) {
        CHECK(clock_identity_residual(c, FrameGrid::discrete(D, 0.3, c.T)) < 1e-12);
    }
    const auto lad = clock_ladder(c, 4);
    CHECK(lad.equally_spaced());
    CHECK(lad.d() == 4);
    CHECK_THROWS_AS(clock_ladder(c, 3), std::invalid_argument);

    const std::array<Rational, 2> unsorted{Rational(1), Rational(0)};
    CHECK_THROWS_AS(clock_from_energies(unsorted), std::invalid_argument);
}

TEST_CASE("reference clock reconstructions") {
    const std::array<Rational, 3> a{Rational(0), Rational(1), Rational(3, 2)};
    const auto ca = clock_from_energies(a);
    CHECK(ca.r == std::vector<std::int64_t>{0, 2, 3});
    CHECK(ca.T == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
    const std::array<Rational, 3> b{Rational(0), Rational(2), Rational(5)};
    const auto cb = clock_from_energies(b);
    CHECK(cb.r == std::vector<std::int64_t>{0, 2, 5});
    CHECK(cb.T == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(cb.values[i] == doctest::Approx(boost::rational_cast<double>(b[i])));
    }
}

TEST_CASE("floating clock levels are rationalized or rejected") {
    const std::array<double, 3> ok{0.0, 0.75, 2.25};
    const auto c = clock_from_values(ok);
    CHECK(c.r == std::vector<std::int64_t>{0, 1, 3});
    const std::array<double, 3> bad{0.0, 1.0, std::numbers::sqrt2};
    CHECK_THROWS_AS(clock_from_values(bad), std::domain_error);
    const auto inc = clock_incommensurate(bad);
    CHECK_FALSE(inc.commensurate);
    CHECK_THROWS_AS(default_clock_grid(inc), std::invalid_argument);
    const auto q = rationalize(0.375, 1e-12, 1000);
    REQUIRE(q.has_value());
    CHECK(*q == Rational(3, 8));
    CHECK_FALSE(rationalize(std::numbers::pi, 1e-14, 100).has_value());
}

TEST_CASE("time states are unit normalized and periodic") {
    const std::array<double, 3> e{-1.0, 0.0, 2.0};
    const auto c = clock_from_values(e);
    const auto g = default_clock_grid(c);
    const auto a = time_state(c, g, 0.4);
    const auto b = time_state(c, g, 0.4 + c.T);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("continuous delta integrals vanish off-diagonal") {
    for (int d = 1; d <= 5; ++d) {
        CHECK(delta_integral_residual(momentum_spectrum(d, 0.5, 2.5), -0.4) < 1e-12);
    }
}
