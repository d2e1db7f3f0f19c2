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

#include "relspace/relational.hpp"
#include "relspace/relativistic.hpp"
#include "relspace/samples.hpp"

using namespace relspace;

namespace {

std::vector<AxisPair> one_axis() {
    return {AxisPair{momentum_spectrum(3, -2.0, kTwoPi), momentum_spectrum(3, 0.0, kTwoPi)}};
}

} // namespace

TEST_CASE("Dirac matrices satisfy the Clifford relations") {
    CHECK(clifford_residual(dirac_algebra()) < 1e-14);
    const auto &a = dirac_algebra();
    CHECK(a.beta(0, 0).real() == 1.0);
    CHECK(a.beta(3, 3).real() == -1.0);
}

TEST_CASE("Dirac Hamiltonian has the relativistic spectrum") {
    const std::array<double, 3> p{0.3, -0.4, 1.2};
    const CMatrix h = dirac_hamiltonian(p, 0.7);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const double e = std::sqrt(0.09 + 0.16 + 1.44 + 0.49);
    CHECK(es.eigenvalues()[0] == doctest::Approx(-e).epsilon(1e-14));
    CHECK(es.eigenvalues()[1] == doctest::Approx(-e).epsilon(1e-14));
    CHECK(es.eigenvalues()[2] == doctest::Approx(e).epsilon(1e-14));
    CHECK(es.eigenvalues()[3] == doctest::Approx(e).epsilon(1e-14));
    CHECK(dirac_spectrum_residual(p, 0.7) < 1e-12);
    const std::array<double, 4> four{0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(dirac_hamiltonian(four, 1.0), std::invalid_argument);
}

TEST_CASE("Klein-Gordon universes satisfy the mass-shell constraint") {
    std::mt19937_64 rng(41);
    for (auto b : {Branch::Positive, Branch::Negative, Branch::Both}) {
        const std::size_t n = b == Branch::Both ? 6 : 3;
        const auto g = kg_universe(one_axis(), 1.0, b, random_unit_vector(rng, n));
        CHECK(*g.report.value("klein-gordon") < 1e-12);
        CHECK(g.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(kg_universe(one_axis(), -1.0, Branch::Positive, random_unit_vector(rng, 3)),
                    std::invalid_argument);
}

TEST_CASE("finite-difference residuals converge at second order") {
    std::mt19937_64 rng(42);
    const auto kg = kg_universe(one_axis(), 1.0, Branch::Both, random_unit_vector(rng, 6));
    const auto dirac = dirac_universe(one_axis(), 1.0, random_unit_vector(rng, 12));
    CHECK(dirac.report.max() < 1e-12);
    const std::vector<Event> ev{{0.3, 0.7}};
    const std::vector<double> hs{0.02, 0.01, 0.005};
    std::vector<double> rk;
    std::vector<double> rd;
    for (double h : hs) {
        rk.push_back(kg_residual(kg, {h, h}, ev));
        rd.push_back(dirac_residual(dirac, {h, h}, ev));
    }
    CHECK(loglog_slope(hs, rk) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(loglog_slope(hs, rd) == doctest::Approx(2.0).epsilon(0.05));
    CHECK_THROWS_AS(kg_residual(kg, {0.0, 0.01}, ev), std::invalid_argument);
    CHECK_THROWS_AS(kg_residual(kg, {3.0, 3.0}, ev), std::domain_error);
}

TEST_CASE("exact-mode floor scales as the inverse frame mass") {
    std::mt19937_64 rng(43);
    const auto c = random_unit_vector(rng, 12);
    const std::vector<Event> ev{{0.3, 0.7}};
    const double a = dirac_floor(dirac_universe(one_axis(), 1.0, c, 100.0), ev);
    const double b = dirac_floor(dirac_universe(one_axis(), 1.0, c, 1000.0), ev);
    CHECK(a / b == doctest::Approx(10.0).epsilon(0.02));
    CHECK(dirac_floor(dirac_universe(one_axis(), 1.0, c), ev) == doctest::Approx(0.0));
    CHECK_THROWS_AS(dirac_universe(one_axis(), 1.0, c, -2.0), std::invalid_argument);
}
