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
#include "relspace/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace relspace {

std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
    std::vector<std::size_t> s(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;) {
        s[i - 1] = s[i] * shape[i];
    }
    return s;
}

std::size_t product_of(std::span<const std::size_t> shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
}

StateVector::StateVector(std::vector<std::size_t> shape, CVector amplitudes,
                         std::vector<FactorLabels> labels,
                         NormConvention convention)
    : shape_(std::move(shape)), amps_(std::move(amplitudes)),
      labels_(std::move(labels)), convention_(convention) {
    if (product_of(shape_) != static_cast<std::size_t>(amps_.size())) {
        throw std::invalid_argument(
            "StateVector: shape product does not match amplitude count");
    }
    if (!labels_.empty()) {
        if (labels_.size() != shape_.size()) {
            throw std::invalid_argument(
                "StateVector: one label set per factor is required");
        }
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            if (!labels_[i].values.empty() &&
                labels_[i].values.size() != shape_[i]) {
                throw std::invalid_argument(
                    "StateVector: label count differs from factor dimension");
            }
        }
    }
    if (!std::isfinite(amps_.norm())) {
        throw std::invalid_argument("StateVector: non-finite amplitudes");
    }
}

StateVector StateVector::zeros(std::vector<std::size_t> shape) {
    const auto n = product_of(shape);
    return {std::move(shape), CVector::Zero(static_cast<Eigen::Index>(n))};
}

StateVector StateVector::basis(std::vector<std::size_t> shape,
                               std::size_t flat) {
    const auto n = product_of(shape);
    if (flat >= n) {
        throw std::out_of_range("StateVector::basis: index out of range");
    }
    CVector a = CVector::Zero(static_cast<Eigen::Index>(n));
    a[static_cast<Eigen::Index>(flat)] = 1.0;
    return {std::move(shape), std::move(a)};
}

bool StateVector::unit_normalized(double tol) const {
    return convention_ == NormConvention::Unit && std::abs(norm() - 1.0) <= tol;
}

std::size_t StateVector::flat_index(std::span<const std::size_t> multi) const {
    if (multi.size() != shape_.size()) {
        throw std::invalid_argument("flat_index: rank mismatch");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < multi.size(); ++i) {
        if (multi[i] >= shape_[i]) {
            throw std::out_of_range("flat_index: index out of range");
        }
        flat = flat * shape_[i] + multi[i];
    }
    return flat;
}

std::vector<std::size_t> StateVector::multi_index(std::size_t flat) const {
    std::vector<std::size_t> m(shape_.size());
    for (std::size_t i = shape_.size(); i-- > 0;) {
        m[i] = flat % shape_[i];
        flat /= shape_[i];
    }
    return m;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<std::size_t> shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    const auto na = static_cast<Eigen::Index>(a.size());
    const auto nb = static_cast<Eigen::Index>(b.size());
    CVector out(na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        out.segment(i * nb, nb) = a.amplitudes()[i] * b.amplitudes();
    }
    std::vector<FactorLabels> labels;
    if (!a.labels().empty() || !b.labels().empty()) {
        labels = a.labels().empty()
                     ? std::vector<FactorLabels>(a.rank())
                     : a.labels();
        const auto lb = b.labels().empty()
                            ? std::vector<FactorLabels>(b.rank())
                            : b.labels();
        labels.insert(labels.end(), lb.begin(), lb.end());
    }
    const auto conv = (a.convention() == NormConvention::Unit &&
                       b.convention() == NormConvention::Unit)
                          ? NormConvention::Unit
                          : NormConvention::Continuum;
    return {std::move(shape), std::move(out), std::move(labels), conv};
}

cplx inner(const StateVector &a, const StateVector &b) {
    if (a.shape() != b.shape()) {
        throw std::invalid_argument("inner: shape mismatch");
    }
    return a.amplitudes().dot(b.amplitudes());
}

StateVector condition(const StateVector &global, std::size_t slot,
                      const StateVector &bra) {
    if (slot >= global.rank()) {
        throw std::out_of_range("condition: slot out of range");
    }
    const std::size_t dim = global.shape()[slot];
    if (bra.size() != dim) {
        throw std::invalid_argument(
            "condition: bra dimension differs from slot dimension");
    }
    std::size_t outer = 1;
    for (std::size_t i = 0; i < slot; ++i) {
        outer *= global.shape()[i];
    }
    const std::size_t inner_n = global.size() / (outer * dim);
    CVector out = CVector::Zero(static_cast<Eigen::Index>(outer * inner_n));
    const auto &g = global.amplitudes();
    const auto &b = bra.amplitudes();
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx w = std::conj(b[static_cast<Eigen::Index>(k)]);
            if (w == cplx{}) {
                continue;
            }
            const auto base = static_cast<Eigen::Index>((o * dim + k) * inner_n);
            out.segment(static_cast<Eigen::Index>(o * inner_n),
                        static_cast<Eigen::Index>(inner_n)) +=
                w * g.segment(base, static_cast<Eigen::Index>(inner_n));
        }
    }
    std::vector<std::size_t> shape = global.shape();
    shape.erase(shape.begin() + static_cast<std::ptrdiff_t>(slot));
    std::vector<FactorLabels> labels = global.labels();
    if (!labels.empty()) {
        labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(slot));
    }
    return {std::move(shape), std::move(out), std::move(labels),
            NormConvention::Unit};
}

double hermiticity_defect(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

LinearOperator::LinearOperator(CMatrix matrix,
                               std::vector<std::size_t> domain_shape,
                               std::vector<std::size_t> slots, bool hermitian)
    : matrix_(std::move(matrix)), domain_shape_(std::move(domain_shape)),
      slots_(std::move(slots)), hermitian_(hermitian) {
    if (domain_shape_.size() != slots_.size() || slots_.empty()) {
        throw std::invalid_argument(
            "LinearOperator: one dimension per targeted slot is required");
    }
    if (!std::is_sorted(slots_.begin(), slots_.end()) ||
        std::adjacent_find(slots_.begin(), slots_.end()) != slots_.end()) {
        throw std::invalid_argument(
            "LinearOperator: slots must be strictly increasing");
    }
    const auto n = static_cast<Eigen::Index>(product_of(domain_shape_));
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw std::invalid_argument(
            "LinearOperator: matrix size differs from domain dimension");
    }
    if (hermitian_) {
        const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
        if (hermiticity_defect(matrix_) > 1e-12 * scale) {
            throw std::invalid_argument(
                "LinearOperator: matrix flagged Hermitian is not");
        }
    }
}

LinearOperator LinearOperator::diagonal(std::span<const double> values,
                                        std::size_t slot) {
    const auto n = static_cast<Eigen::Index>(values.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = values[static_cast<std::size_t>(i)];
    }
    return {std::move(m), {values.size()}, {slot}, true};
}

LinearOperator LinearOperator::identity(std::size_t dim, std::size_t slot) {
    const auto n = static_cast<Eigen::Index>(dim);
    return {CMatrix::Identity(n, n), {dim}, {slot}, true};
}

namespace {

void check_domain(const LinearOperator &op, std::span<const std::size_t> shape) {
    for (std::size_t i = 0; i < op.slots().size(); ++i) {
        const auto s = op.slots()[i];
        if (s >= shape.size() || shape[s] != op.domain_shape()[i]) {
            throw std::invalid_argument(
                "apply: operator domain does not match state shape");
        }
    }
}

// Offsets of the targeted sub-block (in flat state indices) and of every
// complementary position, both in row-major order.
void split_offsets(const LinearOperator &op, std::span<const std::size_t> shape,
                   std::vector<std::size_t> &target,
                   std::vector<std::size_t> &rest) {
    const auto strides = strides_of(shape);
    std::vector<bool> is_target(shape.size(), false);
    for (auto s : op.slots()) {
        is_target[s] = true;
    }
    target.assign(1, 0);
    rest.assign(1, 0);
    for (std::size_t f = 0; f < shape.size(); ++f) {
        auto &acc = is_target[f] ? target : rest;
        std::vector<std::size_t> next;
        next.reserve(acc.size() * shape[f]);
        for (auto base : acc) {
            for (std::size_t k = 0; k < shape[f]; ++k) {
                next.push_back(base + k * strides[f]);
            }
        }
        acc = std::move(next);
    }
}

} // namespace

StateVector apply(const LinearOperator &op, const StateVector &v) {
    check_domain(op, v.shape());
    std::vector<std::size_t> target;
    std::vector<std::size_t> rest;
    split_offsets(op, v.shape(), target, rest);
    const auto n = static_cast<Eigen::Index>(target.size());
    CVector out = CVector::Zero(static_cast<Eigen::Index>(v.size()));
    CVector block(n);
    for (auto r : rest) {
        for (Eigen::Index i = 0; i < n; ++i) {
            block[i] = v.amplitudes()[static_cast<Eigen::Index>(
                r + target[static_cast<std::size_t>(i)])];
        }
        const CVector res = op.matrix() * block;
        for (Eigen::Index i = 0; i < n; ++i) {
            out[static_cast<Eigen::Index>(r + target[static_cast<std::size_t>(
                                                  i)])] = res[i];
        }
    }
    return {v.shape(), std::move(out), v.labels(), v.convention()};
}

StateVector apply_sum(std::span<const LinearOperator> ops,
                      const StateVector &v) {
    CVector acc = CVector::Zero(static_cast<Eigen::Index>(v.size()));
    for (const auto &op : ops) {
        acc += apply(op, v).amplitudes();
    }
    return {v.shape(), std::move(acc), v.labels(), v.convention()};
}

CMatrix embed(const LinearOperator &op, std::span<const std::size_t> shape) {
    check_domain(op, shape);
    std::vector<std::size_t> target;
    std::vector<std::size_t> rest;
    split_offsets(op, shape, target, rest);
    const auto n = static_cast<Eigen::Index>(product_of(shape));
    CMatrix out = CMatrix::Zero(n, n);
    const auto m = target.size();
    for (auto r : rest) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                out(static_cast<Eigen::Index>(r + target[i]),
                    static_cast<Eigen::Index>(r + target[j])) =
                    op.matrix()(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
            }
        }
    }
    return out;
}

CMatrix embed_sum(std::span<const LinearOperator> ops,
                  std::span<const std::size_t> shape) {
    const auto n = static_cast<Eigen::Index>(product_of(shape));
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto &op : ops) {
        out += embed(op, shape);
    }
    return out;
}

CMatrix unitary(const CMatrix &h, double t) {
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (hermiticity_defect(h) > 1e-12 * scale) {
        throw std::invalid_argument("evolve: Hamiltonian is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const auto &vals = es.eigenvalues();
    CVector phases(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        phases[i] = std::exp(-kI * (vals[i] * t));
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

StateVector evolve(const LinearOperator &h, double t, const StateVector &v) {
    const LinearOperator u(unitary(h.matrix(), t), h.domain_shape(), h.slots());
    return apply(u, v);
}

CMatrix eigenspace_projector(const CMatrix &h, double value, double tol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const auto n = h.rows();
    CMatrix p = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(es.eigenvalues()[i] - value) <= tol) {
            const CVector col = es.eigenvectors().col(i);
            p += col * col.adjoint();
        }
    }
    return p;
}

StateVector operator+(const StateVector &a, const StateVector &b) {
    if (a.shape() != b.shape()) {
        throw std::invalid_argument("operator+: shape mismatch");
    }
    return {a.shape(), a.amplitudes() + b.amplitudes(), a.labels(),
            a.convention()};
}

StateVector operator-(const StateVector &a, const StateVector &b) {
    if (a.shape() != b.shape()) {
        throw std::invalid_argument("operator-: shape mismatch");
    }
    return {a.shape(), a.amplitudes() - b.amplitudes(), a.labels(),
            a.convention()};
}

StateVector operator*(cplx s, const StateVector &v) {
    return {v.shape(), s * v.amplitudes(), v.labels(), v.convention()};
}

} // namespace relspace
