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
#include "relspace/relativistic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relspace/relational.hpp"

namespace relspace {

namespace {

CMatrix pauli(int i) {
    CMatrix s = CMatrix::Zero(2, 2);
    switch (i) {
    case 0:
        s(0, 1) = 1.0;
        s(1, 0) = 1.0;
        break;
    case 1:
        s(0, 1) = -kI;
        s(1, 0) = kI;
        break;
    default:
        s(0, 0) = 1.0;
        s(1, 1) = -1.0;
        break;
    }
    return s;
}

DiracAlgebra make_algebra() {
    DiracAlgebra alg;
    for (int i = 0; i < 3; ++i) {
        alg.alpha[static_cast<std::size_t>(i)] = CMatrix::Zero(4, 4);
        alg.alpha[static_cast<std::size_t>(i)].block(0, 2, 2, 2) = pauli(i);
        alg.alpha[static_cast<std::size_t>(i)].block(2, 0, 2, 2) = pauli(i);
    }
    alg.beta = CMatrix::Zero(4, 4);
    alg.beta.diagonal() << 1.0, 1.0, -1.0, -1.0;
    return alg;
}

void check_axes(std::span<const AxisPair> axes) {
    if (axes.empty() || axes.size() > 3) {
        throw std::invalid_argument("universe needs one to three axes");
    }
}

std::vector<std::size_t> sys_dims(std::span<const AxisPair> axes) {
    std::vector<std::size_t> dims;
    for (const auto &a : axes) {
        dims.push_back(a.sys.values.size());
    }
    return dims;
}

// Momentum vector and rod/system indices of one mode.
struct Mode {
    std::vector<double> p;
    std::vector<std::size_t> index;  // rod indices then system indices
};

Mode mode_of(std::span<const AxisPair> axes, std::span<const std::size_t> dims,
             std::size_t flat) {
    Mode m;
    std::vector<std::size_t> sys(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        sys[a] = flat % dims[a];
        flat /= dims[a];
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
        m.p.push_back(axes[a].sys.values[sys[a]]);
        m.index.push_back(detail::partner_level(axes[a].rod, m.p.back(),
                                                static_cast<int>(a)));
    }
    m.index.insert(m.index.end(), sys.begin(), sys.end());
    return m;
}

double squared(std::span<const double> p) {
    double s = 0.0;
    for (double x : p) {
        s += x * x;
    }
    return s;
}

std::vector<Factor> mirrored_factors(std::span<const AxisPair> axes) {
    std::vector<Factor> out;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        out.push_back(detail::momentum_factor(Role::Rod, static_cast<int>(a),
                                              axes[a].rod, PhaseSign::Mirrored));
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
        out.push_back(detail::momentum_factor(Role::System, static_cast<int>(a),
                                              axes[a].sys, PhaseSign::Mirrored));
    }
    return out;
}

ClockOptions relativistic_clock() {
    ClockOptions o;
    o.allow_incommensurate = true;
    return o;
}

double rod_kinetic(std::optional<double> frame_mass, double p2) {
    if (!frame_mass) {
        return 0.0;
    }
    if (!(*frame_mass > 0.0)) {
        throw std::invalid_argument("frame mass must be positive");
    }
    return p2 / (2.0 * *frame_mass);
}

std::vector<Reading> event_readings(const GlobalState &g, const Event &e) {
    const int axes = g.axes();
    if (static_cast<int>(e.size()) != axes + 1) {
        throw std::invalid_argument(
            "sample point needs one time and one coordinate per axis");
    }
    const auto &clock = g.factors[g.require(Role::Clock)];
    std::vector<Reading> r{Reading::clock(continuous_grid(clock), e[0])};
    for (int a = 0; a < axes; ++a) {
        const auto &rod = g.factors[g.require(Role::Rod, a)];
        r.push_back(Reading::rod(continuous_grid(rod), e[static_cast<std::size_t>(a) + 1], a));
    }
    return r;
}

CVector psi_at(const GlobalState &g, const Event &e) {
    const auto r = event_readings(g, e);
    return relative_state(g, r).vector.amplitudes();
}

Event shifted(Event e, std::size_t i, double h) {
    e[i] += h;
    return e;
}

void check_aliasing(const GlobalState &g, const FdGrid &grid) {
    if (!(grid.h_time > 0.0) || !(grid.h_space > 0.0)) {
        throw std::invalid_argument("finite-difference spacings must be positive");
    }
    double wt = 0.0;
    for (double e : g.factors[g.require(Role::Clock)].levels) {
        wt = std::max(wt, std::abs(e));
    }
    double wx = 0.0;
    for (auto s : g.slots(Role::Rod)) {
        for (double p : g.factors[s].levels) {
            wx = std::max(wx, std::abs(p));
        }
    }
    if (grid.h_time * wt >= std::numbers::pi ||
        grid.h_space * wx >= std::numbers::pi) {
        throw std::domain_error(
            "finite-difference spacing aliases the fastest phase");
    }
}

double particle_mass(const GlobalState &g) { return g.sys_dispersion.mass; }

// Copy of g with every term scaled by f(term).
template <class F> GlobalState scaled(const GlobalState &g, F f) {
    GlobalState out = g;
    for (auto &t : out.terms) {
        t.c *= f(t);
    }
    return out;
}

std::vector<double> term_momentum(const GlobalState &g, const Term &t) {
    std::vector<double> p;
    for (auto s : g.slots(Role::System)) {
        if (g.factors[s].basis == BasisKind::Momentum) {
            p.push_back(g.factors[s].levels[t.index[s]]);
        }
    }
    return p;
}

// alpha_J or beta acting on the spin slot of a system vector whose last
// factor is the spin.
CVector on_spin(const CMatrix &m, const CVector &v) {
    const Eigen::Index n = v.size() / 4;
    CVector out(v.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        out.segment(4 * i, 4) = m * v.segment(4 * i, 4);
    }
    return out;
}

void require_dirac(const GlobalState &g) {
    if (g.sys_dispersion.kind != Dispersion::Kind::Dirac || !g.slot(Role::Spin)) {
        throw std::invalid_argument("not a Dirac universe");
    }
    if (*g.slot(Role::Spin) != g.factors.size() - 1) {
        throw std::logic_error("spin factor must be the last factor");
    }
}

} // namespace

const DiracAlgebra &dirac_algebra() {
    static const DiracAlgebra alg = make_algebra();
    return alg;
}

double clifford_residual(const DiracAlgebra &alg) {
    const CMatrix id = CMatrix::Identity(4, 4);
    double r = 0.0;
    auto defect = [&](const CMatrix &m) {
        r = std::max(r, m.cwiseAbs().maxCoeff());
    };
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            defect(alg.alpha[i] * alg.alpha[j] + alg.alpha[j] * alg.alpha[i] -
                   (i == j ? 2.0 : 0.0) * id);
        }
        defect(alg.alpha[i] * alg.beta + alg.beta * alg.alpha[i]);
    }
    defect(alg.beta * alg.beta - id);
    return r;
}

CMatrix dirac_hamiltonian(std::span<const double> p, double mass) {
    if (p.size() > 3) {
        throw std::invalid_argument("momentum has more than three components");
    }
    const auto &alg = dirac_algebra();
    CMatrix h = mass * alg.beta;
    for (std::size_t a = 0; a < p.size(); ++a) {
        h += p[a] * alg.alpha[a];
    }
    return h;
}

double dirac_spectrum_residual(std::span<const double> p, double mass) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(dirac_hamiltonian(p, mass));
    const double e = std::sqrt(squared(p) + mass * mass);
    const std::array<double, 4> expect{-e, -e, e, e};
    double r = 0.0;
    for (int i = 0; i < 4; ++i) {
        r = std::max(r, std::abs(es.eigenvalues()[i] -
                                 expect[static_cast<std::size_t>(i)]));
    }
    return r;
}

GlobalState kg_universe(std::span<const AxisPair> axes, double mass,
                        Branch branch, std::span<const cplx> coeffs,
                        std::optional<double> frame_mass) {
    check_axes(axes);
    if (mass < 0.0) {
        throw std::invalid_argument("kg_universe: mass must be non-negative");
    }
    const auto dims = sys_dims(axes);
    const std::size_t modes = product_of(dims);
    const std::size_t blocks = branch == Branch::Both ? 2 : 1;
    if (coeffs.size() != blocks * modes) {
        throw std::invalid_argument(
            "kg_universe: coefficient count must equal branches x modes");
    }
    detail::require_normalized(coeffs);
    std::vector<detail::PendingTerm> terms;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double sign =
            (branch == Branch::Negative || b == 1) ? -1.0 : 1.0;
        for (std::size_t k = 0; k < modes; ++k) {
            const cplx c = coeffs[b * modes + k];
            if (c == cplx{}) {
                continue;
            }
            auto md = mode_of(axes, dims, k);
            const double p2 = squared(md.p);
            const double eps = sign * std::sqrt(p2 + mass * mass);
            terms.push_back({c, -eps - rod_kinetic(frame_mass, p2),
                             std::move(md.index)});
        }
    }
    auto g = detail::assemble(mirrored_factors(axes), std::move(terms), true,
                              relativistic_clock());
    g.rod_dispersion =
        frame_mass ? Dispersion::free(*frame_mass) : Dispersion::none();
    g.sys_dispersion = Dispersion::relativistic(
        mass, branch == Branch::Negative ? -1 : 1);
    compute_constraint_report(g, false);
    // ((H_C + H_R)^2 - |P_S|^2 - m^2)|Psi> evaluated on the terms; indices
    // are unique after canonicalization so the norm is a plain sum.
    const auto cs = g.require(Role::Clock);
    double acc = 0.0;
    for (const auto &t : g.terms) {
        const auto p = term_momentum(g, t);
        const double p2 = squared(p);
        const double e = g.factors[cs].levels[t.index[cs]] + rod_kinetic(frame_mass, p2);
        acc += std::norm(t.c) * std::pow(e * e - p2 - mass * mass, 2);
    }
    g.report.residuals.push_back({"klein-gordon", std::sqrt(acc)});
    if (branch == Branch::Both) {
        g.report.notes.emplace_back(
            "both branches present: the linear energy constraint does not "
            "apply, only the quadratic one");
    }
    return g;
}

GlobalState dirac_universe(std::span<const AxisPair> axes, double mass,
                           std::span<const cplx> coeffs,
                           std::optional<double> frame_mass) {
    check_axes(axes);
    if (mass < 0.0) {
        throw std::invalid_argument("dirac_universe: mass must be non-negative");
    }
    const auto dims = sys_dims(axes);
    const std::size_t modes = product_of(dims);
    if (coeffs.size() != 4 * modes) {
        throw std::invalid_argument(
            "dirac_universe: coefficient count must equal 4 x modes");
    }
    detail::require_normalized(coeffs);
    std::vector<detail::PendingTerm> terms;
    for (std::size_t k = 0; k < modes; ++k) {
        auto md = mode_of(axes, dims, k);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(dirac_hamiltonian(md.p, mass));
        const double kin = rod_kinetic(frame_mass, squared(md.p));
        for (Eigen::Index s = 0; s < 4; ++s) {
            const cplx c = coeffs[4 * k + static_cast<std::size_t>(s)];
            if (c == cplx{}) {
                continue;
            }
            for (std::size_t sigma = 0; sigma < 4; ++sigma) {
                const cplx a = c * es.eigenvectors()(static_cast<Eigen::Index>(sigma), s);
                if (a == cplx{}) {
                    continue;
                }
                auto idx = md.index;
                idx.push_back(sigma);
                terms.push_back({a, -es.eigenvalues()[s] - kin, std::move(idx)});
            }
        }
    }
    auto factors = mirrored_factors(axes);
    Factor spin;
    spin.role = Role::Spin;
    spin.basis = BasisKind::Spin;
    spin.levels = {0.0, 1.0, 2.0, 3.0};
    factors.push_back(std::move(spin));
    auto g = detail::assemble(std::move(factors), std::move(terms), true,
                              relativistic_clock());
    g.rod_dispersion =
        frame_mass ? Dispersion::free(*frame_mass) : Dispersion::none();
    g.sys_dispersion = Dispersion::dirac(mass);
    compute_constraint_report(g, true);
    g.report.notes.emplace_back(
        "Dirac representation: standard (beta = diag(1,1,-1,-1))");
    return g;
}

double kg_residual(const GlobalState &g, const FdGrid &grid,
                   std::span<const Event> samples) {
    check_aliasing(g, grid);
    const double m2 = particle_mass(g) * particle_mass(g);
    double worst = 0.0;
    for (const auto &e : samples) {
        const CVector c = psi_at(g, e);
        CVector r = (psi_at(g, shifted(e, 0, grid.h_time)) - 2.0 * c +
                     psi_at(g, shifted(e, 0, -grid.h_time))) /
                        (grid.h_time * grid.h_time) +
                    m2 * c;
        for (std::size_t j = 1; j < e.size(); ++j) {
            r -= (psi_at(g, shifted(e, j, grid.h_space)) - 2.0 * c +
                  psi_at(g, shifted(e, j, -grid.h_space))) /
                 (grid.h_space * grid.h_space);
        }
        worst = std::max(worst, r.norm());
    }
    return worst;
}

double kg_floor(const GlobalState &g, std::span<const Event> samples) {
    const auto cs = g.require(Role::Clock);
    const double m2 = particle_mass(g) * particle_mass(g);
    // Each plane wave contributes (-E^2 + |p|^2 + m^2) times itself.
    const auto lim = scaled(g, [&](const Term &t) {
        const double e = g.factors[cs].levels[t.index[cs]];
        return cplx(-e * e + squared(term_momentum(g, t)) + m2);
    });
    double worst = 0.0;
    for (const auto &e : samples) {
        worst = std::max(worst, psi_at(lim, e).norm());
    }
    return worst;
}

double dirac_residual(const GlobalState &g, const FdGrid &grid,
                      std::span<const Event> samples) {
    require_dirac(g);
    check_aliasing(g, grid);
    const auto &alg = dirac_algebra();
    const double m = particle_mass(g);
    double worst = 0.0;
    for (const auto &e : samples) {
        const CVector c = psi_at(g, e);
        const CVector dt = (psi_at(g, shifted(e, 0, grid.h_time)) -
                            psi_at(g, shifted(e, 0, -grid.h_time))) /
                           (2.0 * grid.h_time);
        CVector rhs = m * on_spin(alg.beta, c);
        for (std::size_t j = 1; j < e.size(); ++j) {
            const CVector dj = (psi_at(g, shifted(e, j, grid.h_space)) -
                                psi_at(g, shifted(e, j, -grid.h_space))) /
                               (2.0 * grid.h_space);
            rhs -= kI * on_spin(alg.alpha[j - 1], dj);
        }
        worst = std::max(worst, (kI * dt - rhs).norm());
    }
    return worst;
}

double dirac_floor(const GlobalState &g, std::span<const Event> samples) {
    require_dirac(g);
    const auto cs = g.require(Role::Clock);
    const auto &alg = dirac_algebra();
    const double m = particle_mass(g);
    // i d0 brings down -E; -i alpha.grad brings down alpha.p on the
    // mirrored frames.
    const auto de = scaled(g, [&](const Term &t) {
        return cplx(-g.factors[cs].levels[t.index[cs]]);
    });
    std::array<GlobalState, 3> dp;
    for (std::size_t a = 0; a < static_cast<std::size_t>(g.axes()); ++a) {
        const auto s = g.require(Role::System, static_cast<int>(a));
        dp[a] = scaled(g, [&](const Term &t) {
            return cplx(g.factors[s].levels[t.index[s]]);
        });
    }
    double worst = 0.0;
    for (const auto &e : samples) {
        CVector r = psi_at(de, e) - m * on_spin(alg.beta, psi_at(g, e));
        for (std::size_t a = 0; a < static_cast<std::size_t>(g.axes()); ++a) {
            r -= on_spin(alg.alpha[a], psi_at(dp[a], e));
        }
        worst = std::max(worst, r.norm());
    }
    return worst;
}

} // namespace relspace
