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
#include "relspace/relational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "relspace/oscillator.hpp"

namespace relspace {

namespace testing {
namespace {
std::atomic<bool> g_phase_fault{false};
}
void set_phase_fault(bool on) { g_phase_fault.store(on); }
bool phase_fault() { return g_phase_fault.load(); }
} // namespace testing

Reading Reading::clock(const FrameGrid &g, double t) {
    return {Role::Clock, 0, t, g, -1, Role::System};
}
Reading Reading::rod(const FrameGrid &g, double x, int axis) {
    return {Role::Rod, axis, x, g, -1, Role::System};
}
Reading Reading::system(const FrameGrid &g, double y, int axis) {
    return {Role::System, axis, y, g, -1, Role::System};
}
Reading Reading::memory(int record, Role stores, int symbol) {
    return {Role::Memory, 0, static_cast<double>(symbol),
            FrameGrid::discrete(1, 0.0, 1.0), record, stores};
}

FrameGrid continuous_grid(const Factor &f) {
    return FrameGrid::interval(0.0, f.period > 0.0 ? f.period : 1.0);
}

namespace {

std::size_t slot_for(const GlobalState &g, const Reading &r) {
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        const auto &f = g.factors[i];
        if (r.role == Role::Memory) {
            if (f.role == Role::Memory && f.record == r.record &&
                f.stores == r.stores) {
                return i;
            }
        } else if (f.role == r.role && f.axis == r.axis) {
            return i;
        }
    }
    throw std::invalid_argument("no factor matches a " +
                                std::string(role_name(r.role)) + " reading");
}

// <reading|level> for every level of the factor.
std::vector<cplx> bra_amplitudes(const Factor &f, const Reading &r) {
    std::vector<cplx> a(f.dim());
    switch (f.basis) {
    case BasisKind::Momentum:
    case BasisKind::Energy: {
        if (!r.grid.continuous) {
            (void)r.grid.index_of(r.value);
        }
        const double norm = r.grid.continuous
                                ? 1.0
                                : 1.0 / std::sqrt(static_cast<double>(f.dim()));
        // Clock kets carry e^{-iEt}; rod and system kets e^{s i p x}.
        int s = f.basis == BasisKind::Energy ? -1 : static_cast<int>(f.sign);
        if (testing::phase_fault() && f.role == Role::Rod) {
            s = -s;
        }
        for (std::size_t k = 0; k < f.dim(); ++k) {
            a[k] = norm * std::exp(-kI * (s * f.levels[k] * r.value));
        }
        break;
    }
    case BasisKind::OscillatorLevel:
        for (std::size_t k = 0; k < f.dim(); ++k) {
            a[k] = oscillator_position_wavefunction(k, f.mass, f.frequency,
                                                    r.value);
        }
        break;
    case BasisKind::Memory:
    case BasisKind::Spin:
    case BasisKind::Generic: {
        const auto sym = static_cast<long>(std::lround(r.value));
        if (sym < 0 || static_cast<std::size_t>(sym) >= f.dim()) {
            throw std::out_of_range("memory/spin reading out of range");
        }
        a[static_cast<std::size_t>(sym)] = 1.0;
        break;
    }
    }
    return a;
}

double reading_prefactor(const Factor &f, const Reading &r) {
    if ((f.basis == BasisKind::Momentum || f.basis == BasisKind::Energy) &&
        !r.grid.continuous) {
        return std::sqrt(static_cast<double>(f.dim()));
    }
    return 1.0;
}

double outcome_weight(const Factor &f, const Reading &r) {
    if (f.basis == BasisKind::Momentum || f.basis == BasisKind::Energy) {
        return r.grid.continuous ? 1.0 / r.grid.period
                                 : static_cast<double>(f.dim()) / r.grid.D;
    }
    return 1.0;
}

// Contraction of the sparse universe with the reading bras.
RelativeState contract(const GlobalState &g, std::span<const Reading> readings) {
    std::vector<int> cond_of(g.factors.size(), -1);
    std::vector<std::vector<cplx>> amps(readings.size());
    double pref = 1.0;
    for (std::size_t r = 0; r < readings.size(); ++r) {
        const auto s = slot_for(g, readings[r]);
        if (cond_of[s] >= 0) {
            throw std::invalid_argument("two readings target the same factor");
        }
        cond_of[s] = static_cast<int>(r);
        amps[r] = bra_amplitudes(g.factors[s], readings[r]);
        pref *= reading_prefactor(g.factors[s], readings[r]);
    }
    RelativeState out;
    std::vector<std::size_t> shape;
    std::vector<FactorLabels> labels;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (cond_of[i] < 0) {
            out.factors.push_back(i);
            shape.push_back(g.factors[i].dim());
            labels.push_back({g.factors[i].basis, g.factors[i].levels});
        }
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(product_of(shape)));
    for (const auto &t : g.terms) {
        cplx a = t.c;
        std::size_t flat = 0;
        for (std::size_t i = 0; i < g.factors.size(); ++i) {
            if (cond_of[i] >= 0) {
                a *= amps[static_cast<std::size_t>(cond_of[i])][t.index[i]];
            } else {
                flat = flat * g.factors[i].dim() + t.index[i];
            }
        }
        v[static_cast<Eigen::Index>(flat)] += a;
    }
    out.vector = StateVector(std::move(shape), pref * v, std::move(labels));
    out.conditioning.assign(readings.begin(), readings.end());
    out.prefactor = pref;
    return out;
}

// Position of universe slot @p s within the remaining factors.
std::size_t position_in(const RelativeState &rs, std::size_t s) {
    auto it = std::find(rs.factors.begin(), rs.factors.end(), s);
    if (it == rs.factors.end()) {
        throw std::invalid_argument("factor was conditioned away");
    }
    return static_cast<std::size_t>(it - rs.factors.begin());
}

LinearOperator remap(const LinearOperator &op, const RelativeState &rs) {
    std::vector<std::size_t> slots;
    for (auto s : op.slots()) {
        slots.push_back(position_in(rs, s));
    }
    return {op.matrix(), op.domain_shape(), std::move(slots), op.hermitian()};
}

CMatrix remaining_hamiltonian(const GlobalState &g, const RelativeState &rs,
                              std::initializer_list<Role> parts) {
    std::vector<LinearOperator> ops;
    for (Role p : parts) {
        for (const auto &op : energy_operators(g, p)) {
            ops.push_back(remap(op, rs));
        }
    }
    const auto &shape = rs.vector.shape();
    if (ops.empty()) {
        const auto n = static_cast<Eigen::Index>(product_of(shape));
        return CMatrix::Zero(n, n);
    }
    return embed_sum(ops, shape);
}

Reading continuous_clock(const GlobalState &g, double t) {
    const auto s = g.require(Role::Clock);
    return Reading::clock(continuous_grid(g.factors[s]), t);
}

} // namespace

RelativeState relative_state(const GlobalState &g,
                             std::span<const Reading> readings) {
    return contract(g, readings);
}

double conditional_probability(const GlobalState &g,
                               std::span<const Reading> given,
                               std::span<const Reading> outcome) {
    const auto rs = contract(g, given);
    const double den = rs.vector.amplitudes().squaredNorm();
    if (!(den > 0.0)) {
        throw std::domain_error(
            "conditioning readings have zero probability");
    }
    // Contract outcomes from the highest position down so that earlier
    // positions stay valid.
    std::vector<std::pair<std::size_t, const Reading *>> order;
    double weight = 1.0;
    for (const auto &r : outcome) {
        const auto s = slot_for(g, r);
        order.emplace_back(position_in(rs, s), &r);
        weight *= outcome_weight(g.factors[s], r);
    }
    std::sort(order.begin(), order.end(),
              [](const auto &a, const auto &b) { return a.first > b.first; });
    StateVector v = rs.vector;
    for (const auto &[pos, r] : order) {
        const auto &f = g.factors[rs.factors[pos]];
        const auto a = bra_amplitudes(f, *r);
        CVector bra(static_cast<Eigen::Index>(a.size()));
        for (std::size_t k = 0; k < a.size(); ++k) {
            bra[static_cast<Eigen::Index>(k)] = std::conj(a[k]);
        }
        v = condition(v, pos, StateVector({a.size()}, std::move(bra)));
    }
    return weight * v.amplitudes().squaredNorm() / den;
}

double conditional_prob_discrete(const GlobalState &g, const DiscreteEvent &e) {
    if (e.rod.continuous || e.sys.continuous ||
        (e.clock && e.clock->continuous)) {
        throw std::invalid_argument(
            "conditional_prob_discrete: discrete grids required");
    }
    const auto ds = g.factors[g.require(Role::System)].dim();
    if (e.sys.D < static_cast<int>(ds)) {
        throw std::invalid_argument(
            "conditional_prob_discrete: system grid needs D_S >= d_S");
    }
    std::vector<Reading> given{Reading::rod(e.rod, e.rod.point(e.j))};
    if (e.clock) {
        given.push_back(Reading::clock(*e.clock, e.clock->point(e.m)));
    }
    const std::array<Reading, 1> out{Reading::system(e.sys, e.sys.point(e.l))};
    return conditional_probability(g, given, out);
}

double conditional_density(const GlobalState &g, double x,
                           std::optional<double> t, double y) {
    const auto &rod = g.factors[g.require(Role::Rod)];
    const auto &sys = g.factors[g.require(Role::System)];
    std::vector<Reading> given{Reading::rod(continuous_grid(rod), x)};
    if (t) {
        given.push_back(continuous_clock(g, *t));
    }
    const std::array<Reading, 1> out{Reading::system(continuous_grid(sys), y)};
    return conditional_probability(g, given, out);
}

ConditionalDistribution distribution_discrete(const GlobalState &g,
                                              const FrameGrid &rod, int j,
                                              const FrameGrid &sys,
                                              std::optional<FrameGrid> clock,
                                              int m) {
    ConditionalDistribution d;
    d.kind = ConditionalDistribution::Kind::Mass;
    for (int l = 0; l < sys.D; ++l) {
        const double p =
            conditional_prob_discrete(g, {rod, j, sys, l, clock, m});
        d.grid.push_back(sys.point(l));
        d.probabilities.push_back(p);
        d.total += p;
    }
    d.interval = sys.period;
    return d;
}

ConditionalDistribution distribution_density(const GlobalState &g, double x,
                                             std::optional<double> t,
                                             std::size_t points) {
    const auto &sys = g.factors[g.require(Role::System)];
    const std::size_t exact = 2 * (sys.dim() - 1) + 1;
    const std::size_t n =
        std::max(points == 0 ? 32 * sys.dim() : points, exact);
    ConditionalDistribution d;
    d.kind = ConditionalDistribution::Kind::Density;
    d.interval = sys.period;
    const double h = sys.period / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = h * static_cast<double>(i);
        const double p = conditional_density(g, x, t, y);
        d.grid.push_back(y);
        d.probabilities.push_back(p);
        d.total += p * h;
    }
    return d;
}

double closed_form_3level(double c0, double c1, double c2, double L, double M,
                          double m, double t, double delta, int D_S) {
    if (std::abs(c0 * c0 + c1 * c1 + c2 * c2 - 1.0) > 1e-10) {
        throw std::invalid_argument("closed_form_3level: coefficients not normalized");
    }
    const double k = kTwoPi / L;
    const double eps = k * k * (1.0 / (2.0 * M) + 1.0 / (2.0 * m));
    const double s = std::sin(k * delta);
    const double bracket = 1.0 + 2.0 * c0 * c1 * std::cos(eps * t + k * delta) +
                           2.0 * c1 * c2 * std::cos(eps * t - k * delta) +
                           2.0 * c0 * c2 * (1.0 - 2.0 * s * s);
    return bracket / D_S;
}

double closed_form_3level_density(double c0, double c1, double c2, double L,
                                  double M, double m, double t, double delta) {
    return closed_form_3level(c0, c1, c2, L, M, m, t, delta, 1) / L;
}

double translation_residual(const GlobalState &g, std::span<const Reading> at_a,
                            std::span<const Reading> at_b) {
    if (at_a.size() != at_b.size()) {
        throw std::invalid_argument("translation_residual: reading count mismatch");
    }
    const auto ra = contract(g, at_a);
    const auto rb = contract(g, at_b);
    StateVector shifted = ra.vector;
    for (std::size_t i = 0; i < at_a.size(); ++i) {
        if (at_a[i].role != at_b[i].role || at_a[i].axis != at_b[i].axis) {
            throw std::invalid_argument("translation_residual: readings differ in role");
        }
        if (at_a[i].role != Role::Rod) {
            if (at_a[i].value != at_b[i].value) {
                throw std::invalid_argument(
                    "translation_residual: only rod readings may differ");
            }
            continue;
        }
        const double shift = at_b[i].value - at_a[i].value;
        const auto s = g.require(Role::System, at_a[i].axis);
        const auto &f = g.factors[s];
        const auto p = LinearOperator::diagonal(f.levels, position_in(ra, s));
        // e^{s i P shift} = evolve(P, -s shift)
        shifted = evolve(p, -static_cast<double>(f.sign) * shift, shifted);
    }
    return (rb.vector - shifted).norm();
}

double evolution_residual(const GlobalState &g, const FrameGrid &clock,
                          double t_a, double t_b) {
    if (!g.slot(Role::Clock)) {
        throw std::invalid_argument(
            "evolution_residual: universe has no clock (momentum-only)");
    }
    const std::array<Reading, 1> ra{Reading::clock(clock, t_a)};
    const std::array<Reading, 1> rb{Reading::clock(clock, t_b)};
    const auto a = contract(g, ra);
    const auto b = contract(g, rb);
    const CMatrix h = remaining_hamiltonian(g, a, {Role::Rod, Role::System});
    const CVector evolved = unitary(h, t_b - t_a) * a.vector.amplitudes();
    return (b.vector.amplitudes() - evolved).norm();
}

double schrodinger_fd_residual(const GlobalState &g, double t, double h) {
    auto phi = [&](double tt) {
        const std::array<Reading, 1> r{continuous_clock(g, tt)};
        return contract(g, r);
    };
    const auto c = phi(t);
    const CVector d = (phi(t + h).vector.amplitudes() -
                       phi(t - h).vector.amplitudes()) /
                      (2.0 * h);
    const CMatrix H = remaining_hamiltonian(g, c, {Role::Rod, Role::System});
    return (kI * d - H * c.vector.amplitudes()).norm();
}

double heavy_reference_residual(const GlobalState &g, double t,
                                std::span<const double> x, double h) {
    if (static_cast<int>(x.size()) != g.axes()) {
        throw std::invalid_argument(
            "heavy_reference_residual: one rod reading per axis required");
    }
    auto psi = [&](double tt) {
        std::vector<Reading> r{continuous_clock(g, tt)};
        for (std::size_t a = 0; a < x.size(); ++a) {
            const auto &rod = g.factors[g.require(Role::Rod, static_cast<int>(a))];
            r.push_back(Reading::rod(continuous_grid(rod), x[a], static_cast<int>(a)));
        }
        return contract(g, r);
    };
    const auto c = psi(t);
    const CVector d =
        (psi(t + h).vector.amplitudes() - psi(t - h).vector.amplitudes()) /
        (2.0 * h);
    const CMatrix H = remaining_hamiltonian(g, c, {Role::System});
    return (kI * d - H * c.vector.amplitudes()).norm();
}

cplx overlap_function(const GlobalState &g, double dx, int axis) {
    const auto s = g.require(Role::System, axis);
    const auto &f = g.factors[s];
    cplx acc{};
    double w = 0.0;
    for (const auto &t : g.terms) {
        const double p = f.levels[t.index[s]];
        acc += std::norm(t.c) *
               std::exp(kI * (static_cast<double>(f.sign) * p * dx));
        w += std::norm(t.c);
    }
    return acc / w;
}

ResolutionReport spatial_resolution(const GlobalState &g, double threshold,
                                    double kappa, int axis) {
    const auto s = g.require(Role::System, axis);
    const auto &f = g.factors[s];
    ResolutionReport rep;
    rep.threshold = threshold;
    rep.kappa = kappa;
    double mean = 0.0;
    double second = 0.0;
    double w = 0.0;
    for (const auto &t : g.terms) {
        const double p = f.levels[t.index[s]];
        mean += std::norm(t.c) * p;
        second += std::norm(t.c) * p * p;
        w += std::norm(t.c);
    }
    mean /= w;
    second /= w;
    rep.delta_p = std::sqrt(std::max(0.0, second - mean * mean));
    const double L = f.period;
    const std::size_t n = 256 * f.dim();
    auto excess = [&](double dx) {
        return std::abs(overlap_function(g, dx, axis)) - threshold;
    };
    double prev = 0.0;
    rep.dx = L;
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = L * static_cast<double>(i) / static_cast<double>(n);
        if (excess(x) <= 0.0) {
            double lo = prev;
            double hi = x;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi);
                 ++it) {
                const double mid = 0.5 * (lo + hi);
                (excess(mid) <= 0.0 ? hi : lo) = mid;
            }
            rep.crossed = true;
            rep.dx = hi;
            break;
        }
        prev = x;
    }
    rep.product = rep.dx * rep.delta_p;
    rep.satisfied = !rep.crossed || rep.product >= kappa;
    return rep;
}

namespace {

struct SurvivalTerms {
    // For each non-clock index: amplitude pieces (c, E_clock).
    std::vector<std::vector<std::pair<cplx, double>>> groups;
};

SurvivalTerms survival_terms(const GlobalState &g) {
    const auto cs = g.require(Role::Clock);
    std::map<std::vector<std::size_t>, std::size_t> where;
    SurvivalTerms st;
    for (const auto &t : g.terms) {
        auto rest = t.index;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(cs));
        auto [it, fresh] = where.emplace(rest, st.groups.size());
        if (fresh) {
            st.groups.emplace_back();
        }
        st.groups[it->second].emplace_back(t.c, g.factors[cs].levels[t.index[cs]]);
    }
    return st;
}

// f(t) and df/dt for the clock-conditioned state with continuous readings.
std::pair<cplx, cplx> survival(const SurvivalTerms &st, double t) {
    cplx f{};
    cplx df{};
    for (const auto &grp : st.groups) {
        cplx a0{};
        cplx at{};
        cplx dat{};
        for (const auto &[c, e] : grp) {
            a0 += c;
            const cplx ph = std::exp(kI * (e * t));
            at += c * ph;
            dat += c * kI * e * ph;
        }
        f += std::conj(a0) * at;
        df += std::conj(a0) * dat;
    }
    return {f, df};
}

} // namespace

cplx survival_amplitude(const GlobalState &g, double t) {
    return survival(survival_terms(g), t).first;
}

SpeedLimitReport speed_limit_report(const GlobalState &g) {
    if (!g.slot(Role::Clock)) {
        throw std::invalid_argument(
            "speed_limit_report: universe has no clock (momentum-only)");
    }
    SpeedLimitReport rep;
    const std::array<Reading, 1> r0{continuous_clock(g, 0.0)};
    const auto phi = contract(g, r0);
    const CMatrix H = remaining_hamiltonian(g, phi, {Role::Rod, Role::System});
    const CVector v = phi.vector.amplitudes();
    const double nrm = v.squaredNorm();
    const CVector hv = H * v;
    rep.E_RS = v.dot(hv).real() / nrm;
    rep.delta_E =
        std::sqrt(std::max(0.0, hv.squaredNorm() / nrm - rep.E_RS * rep.E_RS));
    constexpr double pi = std::numbers::pi;
    rep.bound_ml = rep.E_RS > 0.0 ? pi / (2.0 * rep.E_RS) : 0.0;
    rep.bound_mt = rep.delta_E > 0.0 ? pi / (2.0 * rep.delta_E) : 0.0;
    rep.bound = std::max(rep.bound_ml, rep.bound_mt);

    const auto st = survival_terms(g);
    const double f0 = std::abs(survival(st, 0.0).first);
    if (g.clock && g.clock->commensurate) {
        rep.period = g.clock->T;
    } else {
        const auto &lv = g.factors[g.require(Role::Clock)].levels;
        double gap = 0.0;
        for (std::size_t i = 1; i < lv.size(); ++i) {
            const double d = lv[i] - lv[i - 1];
            gap = gap == 0.0 ? d : std::min(gap, d);
        }
        rep.period = gap > 0.0 ? 10.0 * kTwoPi / gap : kTwoPi;
    }
    if (rep.delta_E > 0.0) {
        // Mandelstam-Tamm envelope on its domain of validity.
        rep.mt_margin = std::numeric_limits<double>::infinity();
        const int n = 512;
        for (int i = 0; i <= n; ++i) {
            const double t = rep.bound_mt * i / n;
            rep.mt_margin =
                std::min(rep.mt_margin, std::abs(survival(st, t).first) / f0 -
                                            std::cos(rep.delta_E * t));
        }
    }
    if (rep.delta_E == 0.0) {
        rep.satisfied = true;
        return rep;
    }
    // d|f|^2/dt = 2 Re(conj(f) f').
    auto slope = [&](double t) {
        const auto [f, df] = survival(st, t);
        return 2.0 * (std::conj(f) * df).real();
    };
    const int n = 4096;
    const double step = rep.period / n;
    double prev_t = 0.0;
    double prev_s = slope(0.0);
    for (int i = 1; i <= n && !rep.t_orth; ++i) {
        const double t = step * i;
        const double s = slope(t);
        if (prev_s < 0.0 && s >= 0.0) {
            double lo = prev_t;
            double hi = t;
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) < 0.0 ? lo : hi) = mid;
            }
            const double tm = 0.5 * (lo + hi);
            if (std::abs(survival(st, tm).first) / f0 <= 1e-9) {
                rep.t_orth = tm;
            }
        }
        prev_t = t;
        prev_s = s;
    }
    rep.satisfied = !rep.t_orth || *rep.t_orth >= rep.bound * (1.0 - 1e-9);
    return rep;
}

double conditional_3plus1(const GlobalState &g, std::span<const Reading> given,
                          std::span<const Reading> outcome) {
    const int axes = g.axes();
    const auto rods = std::count_if(given.begin(), given.end(), [](const auto &r) {
        return r.role == Role::Rod;
    });
    if (rods != axes || static_cast<int>(outcome.size()) != axes) {
        throw std::invalid_argument("conditional_3plus1: axis count mismatch");
    }
    return conditional_probability(g, given, outcome);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two points");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace relspace
