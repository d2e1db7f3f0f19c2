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
#include "relspace/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace relspace {

std::vector<double> hermite_functions(std::size_t n, double u) {
    std::vector<double> h(n + 1);
    h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
    if (n >= 1) {
        h[1] = std::sqrt(2.0) * u * h[0];
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        h[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * u * h[k] -
                   std::sqrt(kk / (kk + 1.0)) * h[k - 1];
    }
    return h;
}

namespace {

cplx minus_i_power(std::size_t k) {
    switch (k % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, -1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, 1.0};
    }
}

// Annihilation operator in n levels.
CMatrix lowering(std::size_t n) {
    const auto N = static_cast<Eigen::Index>(n);
    CMatrix a = CMatrix::Zero(N, N);
    for (Eigen::Index k = 1; k < N; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

} // namespace

cplx oscillator_momentum_wavefunction(std::size_t k, double mass, double omega,
                                      double p) {
    const double s = std::sqrt(mass * omega);
    return minus_i_power(k) * hermite_functions(k, p / s)[k] / std::sqrt(s);
}

double oscillator_position_wavefunction(std::size_t k, double mass,
                                        double omega, double x) {
    const double s = std::sqrt(mass * omega);
    return std::sqrt(s) * hermite_functions(k, s * x)[k];
}

CMatrix oscillator_position_operator(std::size_t levels, double mass,
                                     double omega) {
    const CMatrix a = lowering(levels + 1);
    const CMatrix x = (a + a.adjoint()) / std::sqrt(2.0 * mass * omega);
    const auto n = static_cast<Eigen::Index>(levels);
    return x.topLeftCorner(n, n);
}

CMatrix oscillator_momentum_operator(std::size_t levels, double mass,
                                     double omega) {
    const CMatrix a = lowering(levels + 1);
    const CMatrix p = kI * std::sqrt(mass * omega / 2.0) * (a.adjoint() - a);
    const auto n = static_cast<Eigen::Index>(levels);
    return p.topLeftCorner(n, n);
}

CMatrix oscillator_hamiltonian(std::size_t levels, double mass, double omega) {
    const CMatrix a = lowering(levels + 1);
    const CMatrix x = (a + a.adjoint()) / std::sqrt(2.0 * mass * omega);
    const CMatrix p = kI * std::sqrt(mass * omega / 2.0) * (a.adjoint() - a);
    const CMatrix h =
        p * p / (2.0 * mass) + 0.5 * mass * omega * omega * (x * x);
    const auto n = static_cast<Eigen::Index>(levels);
    return h.topLeftCorner(n, n);
}

MomentumAmplitude MomentumAmplitude::gaussian(double center, double spread) {
    if (!(spread > 0.0)) {
        throw std::invalid_argument("Gaussian amplitude needs a positive spread");
    }
    const double norm =
        std::pow(2.0 * std::numbers::pi * spread * spread, -0.25);
    return {[=](double p) {
                const double u = p - center;
                return cplx{norm * std::exp(-u * u / (4.0 * spread * spread)),
                            0.0};
            },
            center, spread};
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
    }
    return g;
}

double trapezoid_weight(std::size_t i, std::size_t n, double h) {
    return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

CMatrix overlap_matrix(const OscillatorParams &prm,
                       const std::vector<double> &grid) {
    const auto n = static_cast<Eigen::Index>(prm.trunc);
    CMatrix a = CMatrix::Zero(n, n);
    const double h = grid[1] - grid[0];
    const double sr = std::sqrt(prm.M * prm.omega_R);
    const double ss = std::sqrt(prm.m * prm.omega_S);
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const double p = grid[q];
        const cplx w = prm.psi.psi(p) * trapezoid_weight(q, grid.size(), h);
        const auto hr = hermite_functions(prm.trunc - 1, -p / sr);
        const auto hs = hermite_functions(prm.trunc - 1, p / ss);
        for (Eigen::Index k = 0; k < n; ++k) {
            // <E_k|-p>_R is the conjugate of the momentum eigenfunction.
            const cplx br = std::conj(minus_i_power(static_cast<std::size_t>(k)) *
                                      hr[static_cast<std::size_t>(k)] /
                                      std::sqrt(sr));
            for (Eigen::Index l = 0; l < n; ++l) {
                const cplx bs =
                    std::conj(minus_i_power(static_cast<std::size_t>(l)) *
                              hs[static_cast<std::size_t>(l)] / std::sqrt(ss));
                a(k, l) += w * br * bs;
            }
        }
    }
    return a;
}

double mass_between(const MomentumAmplitude &psi, double lo, double hi,
                    std::size_t n) {
    const auto g = uniform_grid(lo, hi, n);
    const double h = g[1] - g[0];
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += std::norm(psi.psi(g[i])) * trapezoid_weight(i, n, h);
    }
    return s;
}

} // namespace

OscillatorUniverse oscillator_universe(const OscillatorParams &prm) {
    if (prm.trunc < 1) {
        throw std::invalid_argument("oscillator_universe: trunc must be >= 1");
    }
    if (prm.quad.points < 3) {
        throw std::invalid_argument(
            "oscillator_universe: quadrature needs at least 3 points");
    }
    if (!(prm.M > 0) || !(prm.m > 0) || !(prm.omega_R > 0) ||
        !(prm.omega_S > 0)) {
        throw std::invalid_argument(
            "oscillator_universe: masses and frequencies must be positive");
    }
    OscillatorUniverse out;
    out.params = prm;
    const double half = prm.quad.half_width * prm.psi.spread;
    const double lo = prm.psi.center - half;
    const double hi = prm.psi.center + half;
    const double inside = mass_between(prm.psi, lo, hi, 8 * prm.quad.points);
    const double wide = mass_between(prm.psi, prm.psi.center - 3.0 * half,
                                     prm.psi.center + 3.0 * half,
                                     24 * prm.quad.points);
    out.window_leakage = std::abs(wide - inside);
    if (out.window_leakage > 1e-6) {
        throw QuadratureError(
            "momentum amplitude extends beyond the quadrature window; "
            "estimated mass outside: " +
                std::to_string(out.window_leakage),
            out.window_leakage);
    }
    out.grid = uniform_grid(lo, hi, prm.quad.points);
    out.overlap = overlap_matrix(prm, out.grid);
    const auto fine = uniform_grid(lo, hi, 2 * prm.quad.points - 1);
    out.quadrature_delta =
        (overlap_matrix(prm, fine) - out.overlap).cwiseAbs().maxCoeff();

    // Clock levels -eps_kl, merged when degenerate.
    const std::size_t n = prm.trunc;
    std::vector<double> levels;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            const double e = -(prm.omega_R * (static_cast<double>(k) + 0.5) +
                               prm.omega_S * (static_cast<double>(l) + 0.5));
            if (std::none_of(levels.begin(), levels.end(), [&](double v) {
                    return detail::same_level(v, e);
                })) {
                levels.push_back(e);
            }
        }
    }
    std::sort(levels.begin(), levels.end());
    if (!prm.clock_coeffs.empty() && prm.clock_coeffs.size() != levels.size()) {
        throw std::invalid_argument(
            "oscillator_universe: expected " + std::to_string(levels.size()) +
            " clock weights, one per distinct level");
    }
    auto level_index = [&](double e) {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (detail::same_level(levels[i], e)) {
                return i;
            }
        }
        throw std::logic_error("oscillator_universe: level not found");
    };

    const auto N = static_cast<Eigen::Index>(n);
    out.coefficients = CMatrix::Zero(N, N);
    std::vector<detail::PendingTerm> terms;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            const double e = -(prm.omega_R * (static_cast<double>(k) + 0.5) +
                               prm.omega_S * (static_cast<double>(l) + 0.5));
            const cplx w = prm.clock_coeffs.empty()
                               ? cplx{1.0}
                               : prm.clock_coeffs[level_index(e)];
            out.coefficients(static_cast<Eigen::Index>(k),
                             static_cast<Eigen::Index>(l)) =
                w * out.overlap(static_cast<Eigen::Index>(k),
                                static_cast<Eigen::Index>(l));
        }
    }
    out.raw_norm = out.coefficients.squaredNorm();
    if (!(out.raw_norm > 0.0)) {
        throw std::invalid_argument("oscillator_universe: state vanishes");
    }
    out.coefficients /= std::sqrt(out.raw_norm);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            const double e = -(prm.omega_R * (static_cast<double>(k) + 0.5) +
                               prm.omega_S * (static_cast<double>(l) + 0.5));
            terms.push_back({out.coefficients(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(l)),
                             e,
                             {k, l}});
        }
    }

    auto osc_factor = [&](Role role, double mass, double omega) {
        Factor f;
        f.role = role;
        f.basis = BasisKind::OscillatorLevel;
        f.mass = mass;
        f.frequency = omega;
        for (std::size_t k = 0; k < n; ++k) {
            f.levels.push_back(omega * (static_cast<double>(k) + 0.5));
        }
        return f;
    };
    std::vector<Factor> spatial{osc_factor(Role::Rod, prm.M, prm.omega_R),
                                osc_factor(Role::System, prm.m, prm.omega_S)};
    ClockOptions opts;
    opts.allow_incommensurate = true;
    out.state = detail::assemble(std::move(spatial), std::move(terms), true, opts);
    out.state.rod_dispersion = Dispersion::oscillator(prm.M, prm.omega_R);
    out.state.sys_dispersion = Dispersion::oscillator(prm.m, prm.omega_S);

    auto &g = out.state;
    g.report.norm_error = std::abs(g.norm_squared() - 1.0);
    std::vector<LinearOperator> h;
    for (Role r : {Role::Clock, Role::Rod, Role::System}) {
        auto part = energy_operators(g, r);
        h.insert(h.end(), part.begin(), part.end());
    }
    g.report.residuals.push_back({"energy", residual_norm(g, h)});

    // Momentum-constrained precursor on the quadrature grid: every grid
    // momentum p pairs with -p on the rod, so the total momentum operator
    // is diagonal there.
    {
        const std::size_t q = out.grid.size();
        const double hstep = out.grid[1] - out.grid[0];
        CVector v(static_cast<Eigen::Index>(q * q));
        v.setZero();
        std::vector<double> rod_p(q);
        for (std::size_t i = 0; i < q; ++i) {
            rod_p[i] = -out.grid[i];
        }
        for (std::size_t i = 0; i < q; ++i) {
            v[static_cast<Eigen::Index>(i * q + i)] =
                prm.psi.psi(out.grid[i]) *
                std::sqrt(trapezoid_weight(i, q, hstep));
        }
        const StateVector pre({q, q}, v);
        const std::array<LinearOperator, 2> ptot{
            LinearOperator::diagonal(rod_p, 0),
            LinearOperator::diagonal(out.grid, 1)};
        out.momentum_residual_precursor = apply_sum(ptot, pre).norm();
    }
    g.report.residuals.push_back(
        {"momentum[0] (momentum-constrained stage)",
         out.momentum_residual_precursor});
    out.momentum_residual_final = residual_norm(g, momentum_operators(g, 0));
    g.report.notes.emplace_back(
        "total momentum of the energy-constrained oscillator state: " +
        std::to_string(out.momentum_residual_final) +
        " (the oscillator Hamiltonian does not commute with total momentum)");
    return out;
}

cplx oscillator_momentum_amplitude(const OscillatorUniverse &u, double t,
                                   double p_rod, double p_sys) {
    const auto &prm = u.params;
    const auto n = static_cast<Eigen::Index>(prm.trunc);
    cplx acc{};
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx fr = oscillator_momentum_wavefunction(
            static_cast<std::size_t>(k), prm.M, prm.omega_R, p_rod);
        for (Eigen::Index l = 0; l < n; ++l) {
            const double eps = prm.omega_R * (static_cast<double>(k) + 0.5) +
                               prm.omega_S * (static_cast<double>(l) + 0.5);
            acc += u.coefficients(k, l) * std::exp(-kI * (eps * t)) * fr *
                   oscillator_momentum_wavefunction(static_cast<std::size_t>(l),
                                                    prm.m, prm.omega_S, p_sys);
        }
    }
    return acc;
}

} // namespace relspace
