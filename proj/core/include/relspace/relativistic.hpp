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
 * Klein-Gordon and Dirac universes and finite-difference checks of the
 * wave equations obeyed by their relative states.
 */

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "relspace/universe.hpp"

namespace relspace {

/// Standard representation: beta = diag(1, 1, -1, -1), alpha_i with Pauli
/// off-diagonal blocks.
struct DiracAlgebra {
    std::array<CMatrix, 3> alpha;
    CMatrix beta;
};

const DiracAlgebra &dirac_algebra();

/// Max-norm defect of {alpha_i, alpha_j} = 2 delta_ij, {alpha_i, beta} = 0
/// and beta^2 = 1.
double clifford_residual(const DiracAlgebra &alg);

/// alpha.p + beta m for a momentum with up to three components.
CMatrix dirac_hamiltonian(std::span<const double> p, double mass);

/// Max |eigenvalue - (+-sqrt(p^2 + m^2))| over the four eigenvalues.
double dirac_spectrum_residual(std::span<const double> p, double mass);

enum class Branch { Positive, Negative, Both };

/// Scalar universe with clock levels -eps(p) = -+sqrt(p^2 + m^2). With
/// Branch::Both, @p coeffs holds the positive-branch block followed by the
/// negative one. A frame mass adds the rod kinetic energy p^2/2M to every
/// level (exact mode).
GlobalState kg_universe(std::span<const AxisPair> axes, double mass,
                        Branch branch, std::span<const cplx> coeffs,
                        std::optional<double> frame_mass = std::nullopt);

/// Spin-1/2 universe; @p coeffs is indexed by (mode, s) with s labelling
/// the eigenvectors of alpha.p + beta m in ascending eigenvalue order.
/// Degenerate eigenvectors sharing a product index are merged.
GlobalState dirac_universe(std::span<const AxisPair> axes, double mass,
                           std::span<const cplx> coeffs,
                           std::optional<double> frame_mass = std::nullopt);

/// A sample point (x0, x1, .., xn) of the frame coordinates.
using Event = std::vector<double>;

struct FdGrid {
    double h_time = 1e-3;
    double h_space = 1e-3;
};

/// Max over samples of ||(d0^2 - sum_J dJ^2 + m^2) psi|| with second
/// central differences. Throws std::domain_error when a spacing aliases
/// the fastest phase.
double kg_residual(const GlobalState &g, const FdGrid &grid,
                   std::span<const Event> samples);
/// Limit of kg_residual as the spacings vanish (nonzero in exact mode).
double kg_floor(const GlobalState &g, std::span<const Event> samples);

/// Max over samples of ||i d0 psi - (-i alpha.grad + beta m) psi|| with
/// first central differences.
double dirac_residual(const GlobalState &g, const FdGrid &grid,
                      std::span<const Event> samples);
double dirac_floor(const GlobalState &g, std::span<const Event> samples);

} // namespace relspace
