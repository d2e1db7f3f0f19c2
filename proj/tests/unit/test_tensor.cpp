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

#include "relspace/tensor.hpp"
#include "relspace/universe.hpp"

using namespace relspace;

namespace {

CMatrix random_hermitian(std::mt19937_64 &rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = cplx{g(rng), g(rng)};
        }
    }
    return a + a.adjoint();
}

StateVector random_state(std::mt19937_64 &rng, std::vector<std::size_t> shape) {
    const auto n = product_of(shape);
    const auto c = random_unit_vector(rng, n);
    return {std::move(shape), Eigen::Map<const CVector>(c.data(), static_cast<Eigen::Index>(n))};
}

} // namespace

TEST_CASE("flat and multi indices are inverse row-major maps") {
    const auto v = StateVector::zeros({2, 3, 4});
    for (std::size_t f = 0; f < v.size(); ++f) {
        const auto mi = v.multi_index(f);
        CHECK(v.flat_index(mi) == f);
    }
    const std::array<std::size_t, 3> last{1, 2, 3};
    CHECK(v.flat_index(last) == 23);
    CHECK(strides_of(v.shape()) == std::vector<std::size_t>{12, 4, 1});
}

TEST_CASE("construction rejects inconsistent data") {
    CHECK_THROWS_AS(StateVector({2, 2}, CVector::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::basis({2, 2}, 4), std::out_of_range);
    CVector bad = CVector::Zero(2);
    bad[0] = cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(StateVector({2}, bad), std::invalid_argument);
    const auto v = StateVector::zeros({2, 2});
    const std::array<std::size_t, 1> short_index{0};
    CHECK_THROWS_AS((void)v.flat_index(short_index), std::invalid_argument);
}

TEST_CASE("tensor product is bilinear and inner products multiply") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_state(rng, {2, 3});
        const auto b = random_state(rng, {4});
        const auto c = random_state(rng, {2, 3});
        const auto d = random_state(rng, {4});
        const cplx lhs = inner(tensor(a, b), tensor(c, d));
        CHECK(std::abs(lhs - inner(a, c) * inner(b, d)) < 1e-14);
        const auto sum = tensor(a + c, b);
        CHECK((sum - tensor(a, b) - tensor(c, b)).norm() < 1e-14);
    }
}

TEST_CASE("conditioning on a basis bra selects a slice") {
    std::mt19937_64 rng(2);
    const auto v = random_state(rng, {3, 4, 2});
    for (std::size_t k = 0; k < 4; ++k) {
        const auto c = condition(v, 1, StateVector::basis({4}, k));
        REQUIRE(c.shape() == std::vector<std::size_t>{3, 2});
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                CHECK(std::abs(c[i * 2 + j] - v[i * 8 + k * 2 + j]) < 1e-15);
            }
        }
    }
    CHECK_THROWS_AS(condition(v, 3, StateVector::basis({4}, 0)), std::out_of_range);
}

TEST_CASE("unitary propagators are unitary and obey the group law") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix h = random_hermitian(rng, 5);
        const CMatrix u = unitary(h, 0.37);
        CHECK((u.adjoint() * u - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((unitary(h, 1.0) - unitary(h, 0.63) * u).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((unitary(h, 0.0) - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("embedded single-factor operators act on their slot") {
    std::mt19937_64 rng(4);
    const auto v = random_state(rng, {3, 2});
    const std::array<double, 2> diag{1.5, -0.5};
    const auto op = LinearOperator::diagonal(diag, 1);
    const auto w = apply(op, v);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(w[i * 2] - 1.5 * v[i * 2]) < 1e-15);
        CHECK(std::abs(w[i * 2 + 1] + 0.5 * v[i * 2 + 1]) < 1e-15);
    }
    const std::array<std::size_t, 2> shape{3, 2};
    const CMatrix dense = embed(op, shape);
    CHECK((dense * v.amplitudes() - w.amplitudes()).norm() < 1e-14);
    CHECK(hermiticity_defect(dense) < 1e-15);
}

TEST_CASE("eigenspace projector is idempotent and spans the eigenspace") {
    CMatrix h = CMatrix::Zero(4, 4);
    h.diagonal() << 0.0, 1.0, 0.0, 2.0;
    const CMatrix p = eigenspace_projector(h, 0.0);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(p.trace() - cplx{2.0, 0.0}) < 1e-12);
    CHECK((h * p).cwiseAbs().maxCoeff() < 1e-12);
}
