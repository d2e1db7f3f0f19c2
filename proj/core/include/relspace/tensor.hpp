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
 * Dense state vectors over labeled tensor-product bases and the operators
 * acting on them.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace relspace {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

/// What the basis elements of one tensor factor represent.
enum class BasisKind { Generic, Momentum, Energy, OscillatorLevel, Memory, Spin };

/// Physical value carried by each basis element of a factor.
struct FactorLabels {
    BasisKind kind = BasisKind::Generic;
    std::vector<double> values;
};

/// Unit: ordinary normalized kets. Continuum: frame states of the
/// continuous-reading convention, whose squared norm equals the dimension.
enum class NormConvention { Unit, Continuum };

class StateVector {
  public:
    StateVector() = default;
    StateVector(std::vector<std::size_t> shape, CVector amplitudes,
                std::vector<FactorLabels> labels = {},
                NormConvention convention = NormConvention::Unit);

    static StateVector zeros(std::vector<std::size_t> shape);
    static StateVector basis(std::vector<std::size_t> shape, std::size_t flat);

    [[nodiscard]] const CVector &amplitudes() const { return amps_; }
    [[nodiscard]] const std::vector<std::size_t> &shape() const {
        return shape_;
    }
    [[nodiscard]] const std::vector<FactorLabels> &labels() const {
        return labels_;
    }
    [[nodiscard]] NormConvention convention() const { return convention_; }
    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(amps_.size());
    }
    [[nodiscard]] std::size_t rank() const { return shape_.size(); }
    [[nodiscard]] double norm() const { return amps_.norm(); }
    [[nodiscard]] bool unit_normalized(double tol = 1e-12) const;

    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> multi) const;
    [[nodiscard]] std::vector<std::size_t> multi_index(std::size_t flat) const;

    [[nodiscard]] cplx operator[](std::size_t flat) const { return amps_[flat]; }

  private:
    std::vector<std::size_t> shape_;
    CVector amps_;
    std::vector<FactorLabels> labels_;
    NormConvention convention_ = NormConvention::Unit;
};

/// Row-major strides of a shape.
std::vector<std::size_t> strides_of(std::span<const std::size_t> shape);
std::size_t product_of(std::span<const std::size_t> shape);

StateVector tensor(const StateVector &a, const StateVector &b);
cplx inner(const StateVector &a, const StateVector &b);

/// Partial inner product of @p bra with tensor slot @p slot of @p global.
StateVector condition(const StateVector &global, std::size_t slot,
                      const StateVector &bra);

class LinearOperator {
  public:
    LinearOperator() = default;
    /// @param domain_shape dimensions of the targeted slots, in slot order.
    /// @param slots target slots; must be strictly increasing.
    LinearOperator(CMatrix matrix, std::vector<std::size_t> domain_shape,
                   std::vector<std::size_t> slots, bool hermitian = false);

    static LinearOperator diagonal(std::span<const double> values,
                                   std::size_t slot);
    static LinearOperator identity(std::size_t dim, std::size_t slot);

    [[nodiscard]] const CMatrix &matrix() const { return matrix_; }
    [[nodiscard]] const std::vector<std::size_t> &domain_shape() const {
        return domain_shape_;
    }
    [[nodiscard]] const std::vector<std::size_t> &slots() const {
        return slots_;
    }
    [[nodiscard]] bool hermitian() const { return hermitian_; }

  private:
    CMatrix matrix_;
    std::vector<std::size_t> domain_shape_;
    std::vector<std::size_t> slots_;
    bool hermitian_ = false;
};

double hermiticity_defect(const CMatrix &m);

StateVector apply(const LinearOperator &op, const StateVector &v);
StateVector apply_sum(std::span<const LinearOperator> ops, const StateVector &v);

/// Dense matrix of @p op acting on the full space of shape @p shape.
CMatrix embed(const LinearOperator &op, std::span<const std::size_t> shape);
CMatrix embed_sum(std::span<const LinearOperator> ops,
                  std::span<const std::size_t> shape);

/// e^{-iHt} for Hermitian H via eigendecomposition.
CMatrix unitary(const CMatrix &h, double t);
StateVector evolve(const LinearOperator &h, double t, const StateVector &v);

/// Projector onto the eigenspace of Hermitian @p h at @p value.
CMatrix eigenspace_projector(const CMatrix &h, double value, double tol = 1e-9);

StateVector operator+(const StateVector &a, const StateVector &b);
StateVector operator-(const StateVector &a, const StateVector &b);
StateVector operator*(cplx s, const StateVector &v);

} // namespace relspace
