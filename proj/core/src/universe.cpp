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
#include "relspace/universe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "relspace/oscillator.hpp"
#include "relspace/relativistic.hpp"

namespace relspace {

std::string_view role_name(Role r) {
    switch (r) {
    case Role::Clock:
        return "clock";
    case Role::Rod:
        return "rod";
    case Role::System:
        return "system";
    case Role::Memory:
        return "memory";
    case Role::Spin:
        return "spin";
    }
    return "unknown";
}

Dispersion Dispersion::free(double mass) {
    if (!(mass > 0.0)) {
        throw std::invalid_argument("free dispersion needs a positive mass");
    }
    return {Kind::Free, mass, 0.0, 1};
}

Dispersion Dispersion::oscillator(double mass, double frequency) {
    if (!(mass > 0.0) || !(frequency > 0.0)) {
        throw std::invalid_argument(
            "oscillator dispersion needs positive mass and frequency");
    }
    return {Kind::Oscillator, mass, frequency, 1};
}

Dispersion Dispersion::relativistic(double mass, int sign) {
    if (mass < 0.0 || (sign != 1 && sign != -1)) {
        throw std::invalid_argument(
            "relativistic dispersion needs mass >= 0 and sign +-1");
    }
    return {Kind::RelativisticScalar, mass, 0.0, sign};
}

Dispersion Dispersion::dirac(double mass) {
    if (mass < 0.0) {
        throw std::invalid_argument("Dirac dispersion needs mass >= 0");
    }
    return {Kind::Dirac, mass, 0.0, 1};
}

double Dispersion::operator()(std::span<const double> p) const {
    double p2 = 0.0;
    for (double x : p) {
        p2 += x * x;
    }
    switch (kind) {
    case Kind::None:
        return 0.0;
    case Kind::Free:
        return p2 / (2.0 * mass);
    case Kind::RelativisticScalar:
        return sign * std::sqrt(p2 + mass * mass);
    case Kind::Dirac:
        return std::sqrt(p2 + mass * mass);
    case Kind::Oscillator:
        throw std::logic_error(
            "oscillator energies are not a function of momentum");
    }
    return 0.0;
}

std::optional<double> ConstraintReport::value(std::string_view name) const {
    for (const auto &r : residuals) {
        if (r.name == name) {
            return r.value;
        }
    }
    return std::nullopt;
}

double ConstraintReport::max() const {
    double m = 0.0;
    for (const auto &r : residuals) {
        m = std::max(m, r.value);
    }
    return m;
}

std::vector<std::size_t> GlobalState::shape() const {
    std::vector<std::size_t> s;
    s.reserve(factors.size());
    for (const auto &f : factors) {
        s.push_back(f.dim());
    }
    return s;
}

StateVector GlobalState::dense() const {
    auto sh = shape();
    CVector a = CVector::Zero(static_cast<Eigen::Index>(product_of(sh)));
    for (const auto &t : terms) {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < sh.size(); ++i) {
            flat = flat * sh[i] + t.index[i];
        }
        a[static_cast<Eigen::Index>(flat)] += t.c;
    }
    std::vector<FactorLabels> labels;
    labels.reserve(factors.size());
    for (const auto &f : factors) {
        labels.push_back({f.basis, f.levels});
    }
    return {std::move(sh), std::move(a), std::move(labels)};
}

std::optional<std::size_t> GlobalState::slot(Role role, int axis) const {
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].role == role && factors[i].axis == axis) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t GlobalState::require(Role role, int axis) const {
    auto s = slot(role, axis);
    if (!s) {
        throw std::invalid_argument("universe has no " +
                                    std::string(role_name(role)) +
                                    " factor on axis " + std::to_string(axis));
    }
    return *s;
}

std::vector<std::size_t> GlobalState::slots(Role role) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].role == role) {
            out.push_back(i);
        }
    }
    return out;
}

int GlobalState::axes() const {
    int n = 0;
    for (const auto &f : factors) {
        if ((f.role == Role::Rod || f.role == Role::System) &&
            f.basis == BasisKind::Momentum) {
            n = std::max(n, f.axis + 1);
        }
    }
    return n;
}

double GlobalState::norm_squared() const {
    double s = 0.0;
    for (const auto &t : terms) {
        s += std::norm(t.c);
    }
    return s;
}

void canonicalize(std::vector<Term> &terms) {
    std::map<std::vector<std::size_t>, cplx> merged;
    for (const auto &t : terms) {
        merged[t.index] += t.c;
    }
    terms.clear();
    for (auto &[idx, c] : merged) {
        if (c != cplx{}) {
            terms.push_back({c, idx});
        }
    }
}

namespace {

// Joint operator over the momentum factors of one role (and the spin
// factor for Dirac systems), diagonal except for the spin block.
std::optional<LinearOperator> dispersion_operator(const GlobalState &g,
                                                  Role role,
                                                  const Dispersion &disp) {
    if (disp.kind == Dispersion::Kind::None) {
        return std::nullopt;
    }
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (g.factors[i].role == role &&
            g.factors[i].basis == BasisKind::Momentum) {
            slots.push_back(i);
        }
    }
    if (slots.empty()) {
        return std::nullopt;
    }
    std::vector<std::size_t> dims;
    for (auto s : slots) {
        dims.push_back(g.factors[s].dim());
    }
    const std::size_t n = product_of(dims);
    std::vector<double> p(slots.size());
    auto momentum_of = [&](std::size_t flat) {
        for (std::size_t i = slots.size(); i-- > 0;) {
            p[i] = g.factors[slots[i]].levels[flat % dims[i]];
            flat /= dims[i];
        }
    };
    if (disp.kind == Dispersion::Kind::Dirac) {
        auto spin = g.slot(Role::Spin, 0);
        if (!spin) {
            throw std::invalid_argument("Dirac system needs a spin factor");
        }
        const auto alg = dirac_algebra();
        CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(4 * n),
                                  static_cast<Eigen::Index>(4 * n));
        for (std::size_t f = 0; f < n; ++f) {
            momentum_of(f);
            CMatrix block = disp.mass * alg.beta;
            for (std::size_t a = 0; a < p.size() && a < 3; ++a) {
                block += p[a] * alg.alpha[a];
            }
            h.block(static_cast<Eigen::Index>(4 * f),
                    static_cast<Eigen::Index>(4 * f), 4, 4) = block;
        }
        slots.push_back(*spin);
        dims.push_back(4);
        return LinearOperator(std::move(h), dims, slots, true);
    }
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(n),
                              static_cast<Eigen::Index>(n));
    for (std::size_t f = 0; f < n; ++f) {
        momentum_of(f);
        h(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f)) = disp(p);
    }
    return LinearOperator(std::move(h), dims, slots, true);
}

} // namespace

std::vector<LinearOperator> energy_operators(const GlobalState &g, Role part) {
    std::vector<LinearOperator> ops;
    if (part == Role::Clock) {
        for (std::size_t i = 0; i < g.factors.size(); ++i) {
            if (g.factors[i].role == Role::Clock) {
                ops.push_back(LinearOperator::diagonal(g.factors[i].levels, i));
            }
        }
        return ops;
    }
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        const auto &f = g.factors[i];
        if (f.role == part && f.basis == BasisKind::OscillatorLevel) {
            ops.emplace_back(oscillator_hamiltonian(f.dim(), f.mass, f.frequency),
                             std::vector<std::size_t>{f.dim()},
                             std::vector<std::size_t>{i}, true);
        }
    }
    const auto &disp = part == Role::Rod ? g.rod_dispersion : g.sys_dispersion;
    if (part == Role::Rod || part == Role::System) {
        if (auto op = dispersion_operator(g, part, disp)) {
            ops.push_back(std::move(*op));
        }
    }
    return ops;
}

std::vector<LinearOperator> momentum_operators(const GlobalState &g, int axis) {
    std::vector<LinearOperator> ops;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        const auto &f = g.factors[i];
        if (f.axis != axis) {
            continue;
        }
        if (f.role == Role::Clock && !f.momenta.empty()) {
            ops.push_back(LinearOperator::diagonal(f.momenta, i));
        } else if ((f.role == Role::Rod || f.role == Role::System) &&
                   f.basis == BasisKind::Momentum) {
            ops.push_back(LinearOperator::diagonal(f.levels, i));
        } else if ((f.role == Role::Rod || f.role == Role::System) &&
                   f.basis == BasisKind::OscillatorLevel) {
            ops.emplace_back(
                oscillator_momentum_operator(f.dim(), f.mass, f.frequency),
                std::vector<std::size_t>{f.dim()}, std::vector<std::size_t>{i},
                true);
        }
    }
    return ops;
}

double residual_norm(const GlobalState &g, std::span<const LinearOperator> ops) {
    return apply_sum(ops, g.dense()).norm();
}

void compute_constraint_report(GlobalState &g, bool energy) {
    g.report.norm_error = std::abs(g.norm_squared() - 1.0);
    for (int a = 0; a < std::max(1, g.axes()); ++a) {
        const auto ops = momentum_operators(g, a);
        if (!ops.empty()) {
            g.report.residuals.push_back(
                {"momentum[" + std::to_string(a) + "]", residual_norm(g, ops)});
        }
    }
    if (energy && g.slot(Role::Clock)) {
        std::vector<LinearOperator> ops;
        for (Role r : {Role::Clock, Role::Rod, Role::System}) {
            auto part = energy_operators(g, r);
            ops.insert(ops.end(), part.begin(), part.end());
        }
        g.report.residuals.push_back({"energy", residual_norm(g, ops)});
    }
}

namespace detail {

bool same_level(double a, double b) {
    return std::abs(a - b) <=
           1e-11 * std::max({1.0, std::abs(a), std::abs(b)});
}

void require_normalized(std::span<const cplx> coeffs) {
    double s = 0.0;
    for (auto c : coeffs) {
        s += std::norm(c);
    }
    if (std::abs(s - 1.0) > 1e-10) {
        throw std::invalid_argument("coefficients are not normalized (sum |c|^2 = " +
                                    std::to_string(s) + ")");
    }
}

Factor momentum_factor(Role role, int axis, const Spectrum &s, PhaseSign sign) {
    Factor f;
    f.role = role;
    f.axis = axis;
    f.basis = BasisKind::Momentum;
    f.levels = s.values;
    f.period = s.L;
    f.sign = sign;
    return f;
}

std::size_t partner_level(const Spectrum &rod, double p, int axis) {
    auto k = rod.find(-p);
    if (!k) {
        throw std::invalid_argument(
            "rod spectrum lacks the partner level " + std::to_string(-p) +
            " on axis " + std::to_string(axis));
    }
    return *k;
}

GlobalState assemble(std::vector<Factor> spatial, std::vector<PendingTerm> terms,
                     bool with_clock, const ClockOptions &opts) {
    GlobalState g;
    if (!with_clock) {
        g.factors = std::move(spatial);
        for (auto &t : terms) {
            g.terms.push_back({t.c, std::move(t.index)});
        }
        canonicalize(g.terms);
        return g;
    }
    std::vector<double> levels;
    for (const auto &t : terms) {
        if (t.c == cplx{}) {
            continue;
        }
        if (std::none_of(levels.begin(), levels.end(),
                         [&](double v) { return same_level(v, t.level); })) {
            levels.push_back(t.level);
        }
    }
    if (levels.empty()) {
        throw std::invalid_argument("universe has no nonzero coefficient");
    }
    std::sort(levels.begin(), levels.end());
    ClockSpectrum clock;
    try {
        clock = clock_from_values(levels, 1e-12, 100000);
    } catch (const std::domain_error &e) {
        if (!opts.allow_incommensurate) {
            throw;
        }
        clock = clock_incommensurate(levels);
        g.report.notes.emplace_back(
            "clock levels are incommensurate; only continuous time readings "
            "are available");
    }
    if (opts.ladder_levels > 0) {
        clock = clock_ladder(
            clock, std::max<std::size_t>(opts.ladder_levels,
                                         static_cast<std::size_t>(clock.r_max()) + 1));
    }
    Factor cf;
    cf.role = Role::Clock;
    cf.basis = BasisKind::Energy;
    cf.levels = clock.values;
    cf.period = clock.T;
    g.factors.push_back(std::move(cf));
    for (auto &f : spatial) {
        g.factors.push_back(std::move(f));
    }
    for (auto &t : terms) {
        if (t.c == cplx{}) {
            continue;
        }
        std::size_t ci = clock.values.size();
        for (std::size_t i = 0; i < clock.values.size(); ++i) {
            if (same_level(clock.values[i], t.level)) {
                ci = i;
                break;
            }
        }
        if (ci == clock.values.size()) {
            throw std::logic_error("assemble: clock level not found");
        }
        std::vector<std::size_t> idx{ci};
        idx.insert(idx.end(), t.index.begin(), t.index.end());
        g.terms.push_back({t.c, std::move(idx)});
    }
    canonicalize(g.terms);
    g.clock = std::move(clock);
    return g;
}

} // namespace detail

GlobalState momentum_constrained_state(const Spectrum &rod, const Spectrum &sys,
                                       std::span<const cplx> coeffs) {
    if (coeffs.size() != sys.values.size()) {
        throw std::invalid_argument(
            "momentum_constrained_state: one coefficient per system level");
    }
    detail::require_normalized(coeffs);
    std::vector<detail::PendingTerm> terms;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == cplx{}) {
            continue;
        }
        terms.push_back({coeffs[k], 0.0,
                         {detail::partner_level(rod, sys.values[k], 0), k}});
    }
    std::vector<Factor> spatial{detail::momentum_factor(Role::Rod, 0, rod),
                                detail::momentum_factor(Role::System, 0, sys)};
    auto g = detail::assemble(std::move(spatial), std::move(terms), false, {});
    compute_constraint_report(g, false);
    return g;
}

GlobalState universe_3plus1(std::span<const AxisPair> axes,
                            const Dispersion &rod_disp,
                            const Dispersion &sys_disp,
                            std::span<const cplx> coeffs,
                            const ClockOptions &opts) {
    if (axes.empty() || axes.size() > 3) {
        throw std::invalid_argument("universe needs one to three axes");
    }
    std::vector<std::size_t> dims;
    for (const auto &a : axes) {
        dims.push_back(a.sys.values.size());
    }
    const std::size_t n = product_of(dims);
    if (coeffs.size() != n) {
        throw std::invalid_argument(
            "universe: coefficient count must equal the product of system "
            "dimensions");
    }
    detail::require_normalized(coeffs);
    std::vector<detail::PendingTerm> terms;
    std::vector<double> p(axes.size());
    std::vector<double> q(axes.size());
    for (std::size_t flat = 0; flat < n; ++flat) {
        if (coeffs[flat] == cplx{}) {
            continue;
        }
        std::vector<std::size_t> sys_idx(axes.size());
        std::size_t rem = flat;
        for (std::size_t a = axes.size(); a-- > 0;) {
            sys_idx[a] = rem % dims[a];
            rem /= dims[a];
        }
        std::vector<std::size_t> idx;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            p[a] = axes[a].sys.values[sys_idx[a]];
            q[a] = -p[a];
            idx.push_back(
                detail::partner_level(axes[a].rod, p[a], static_cast<int>(a)));
        }
        idx.insert(idx.end(), sys_idx.begin(), sys_idx.end());
        const double eps = rod_disp(q) + sys_disp(p);
        terms.push_back({coeffs[flat], -eps, std::move(idx)});
    }
    std::vector<Factor> spatial;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        spatial.push_back(
            detail::momentum_factor(Role::Rod, static_cast<int>(a), axes[a].rod));
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
        spatial.push_back(detail::momentum_factor(Role::System,
                                                  static_cast<int>(a),
                                                  axes[a].sys));
    }
    auto g = detail::assemble(std::move(spatial), std::move(terms), true, opts);
    g.rod_dispersion = rod_disp;
    g.sys_dispersion = sys_disp;
    compute_constraint_report(g, true);
    return g;
}

GlobalState double_constrained_state(const Dispersion &rod_disp,
                                     const Dispersion &sys_disp,
                                     const Spectrum &rod, const Spectrum &sys,
                                     std::span<const cplx> coeffs,
                                     const ClockOptions &opts) {
    const std::array<AxisPair, 1> axes{AxisPair{rod, sys}};
    return universe_3plus1(axes, rod_disp, sys_disp, coeffs, opts);
}

ClockMomentumSearch nonzero_clock_momentum_state(
    const MomentumClock &clock, const Spectrum &rod, const Spectrum &sys,
    const Dispersion &rod_disp, const Dispersion &sys_disp, double tol) {
    if (clock.momenta.size() != clock.energies.size() ||
        clock.energies.empty()) {
        throw std::invalid_argument(
            "clock needs one momentum per energy level");
    }
    ClockMomentumSearch out;
    for (std::size_t a = 0; a < clock.energies.size(); ++a) {
        for (std::size_t b = 0; b < rod.values.size(); ++b) {
            for (std::size_t c = 0; c < sys.values.size(); ++c) {
                const double pr = rod.values[b];
                const double ps = sys.values[c];
                const double ptot = clock.momenta[a] + pr + ps;
                const double er = rod_disp(pr);
                const double es = sys_disp(ps);
                const double etot = clock.energies[a] + er + es;
                const double pscale = std::max({1.0, std::abs(clock.momenta[a]),
                                                std::abs(pr), std::abs(ps)});
                const double escale = std::max({1.0, std::abs(clock.energies[a]),
                                                std::abs(er), std::abs(es)});
                out.momentum_residuals.push_back(std::abs(ptot));
                out.energy_residuals.push_back(std::abs(etot));
                if (std::abs(ptot) <= tol * pscale &&
                    std::abs(etot) <= tol * escale) {
                    out.solutions.push_back({a, b, c});
                }
            }
        }
    }
    if (out.solutions.empty()) {
        return out;
    }
    GlobalState g;
    Factor cf;
    cf.role = Role::Clock;
    cf.basis = BasisKind::Energy;
    cf.levels = clock.energies;
    cf.momenta = clock.momenta;
    g.factors.push_back(std::move(cf));
    g.factors.push_back(detail::momentum_factor(Role::Rod, 0, rod));
    g.factors.push_back(detail::momentum_factor(Role::System, 0, sys));
    const double amp = 1.0 / std::sqrt(static_cast<double>(out.solutions.size()));
    for (const auto &s : out.solutions) {
        g.terms.push_back({amp, {s[0], s[1], s[2]}});
    }
    canonicalize(g.terms);
    std::vector<double> sorted = clock.energies;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() &&
        sorted == clock.energies) {
        try {
            g.clock = clock_from_values(sorted, 1e-12, 100000);
            g.factors[0].period = g.clock->T;
        } catch (const std::domain_error &) {
            g.report.notes.emplace_back("clock levels are incommensurate");
        }
    }
    g.rod_dispersion = rod_disp;
    g.sys_dispersion = sys_disp;
    compute_constraint_report(g, true);
    out.state = std::move(g);
    return out;
}

std::vector<cplx> random_unit_vector(std::mt19937_64 &rng, std::size_t n,
                                     bool real_only) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> v(n);
    double s = 0.0;
    for (auto &x : v) {
        const double re = gauss(rng);
        const double im = real_only ? 0.0 : gauss(rng);
        x = {re, im};
        s += std::norm(x);
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto &x : v) {
        x *= inv;
    }
    return v;
}

} // namespace relspace
