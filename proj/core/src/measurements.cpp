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
#include "relspace/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "relspace/relational.hpp"

namespace relspace {

namespace {

struct Slots {
    std::size_t clock;
    std::size_t rod;
    std::size_t sys;
};

Slots line_slots(const GlobalState &g) {
    if (!g.clock || g.axes() != 1) {
        throw std::invalid_argument(
            "measurement protocols need a one-axis universe with a clock");
    }
    return {g.require(Role::Clock), g.require(Role::Rod), g.require(Role::System)};
}

Spectrum spectrum_of(const Factor &f) {
    Spectrum s;
    s.d = static_cast<int>(f.dim());
    s.p0 = f.levels.front();
    s.L = f.period;
    s.values = f.levels;
    return s;
}

// Sector of vanishing total momentum: one state |-p_k>|p_k> per system
// level with a rod partner.
struct Sector {
    std::vector<std::size_t> rod;
    std::vector<std::size_t> sys;
    std::vector<double> p;
    std::vector<double> eps;
};

Sector sector_of(const GlobalState &g, const Slots &s) {
    Sector out;
    const auto &rod = g.factors[s.rod];
    const auto &sys = g.factors[s.sys];
    for (std::size_t k = 0; k < sys.dim(); ++k) {
        const double p = sys.levels[k];
        for (std::size_t i = 0; i < rod.dim(); ++i) {
            if (detail::same_level(rod.levels[i], -p)) {
                out.rod.push_back(i);
                out.sys.push_back(k);
                out.p.push_back(p);
                out.eps.push_back(g.rod_dispersion(-p) + g.sys_dispersion(p));
                break;
            }
        }
    }
    return out;
}

int sign_of(const Factor &f) { return static_cast<int>(f.sign); }

// <x y|k> for sector state k, without the 1/sqrt(d_R d_S) factor.
cplx sector_bra(const Sector &sec, std::size_t k, int s, double x, double y) {
    return std::exp(-kI * (s * (-sec.p[k] * x + sec.p[k] * y)));
}

void require_orthogonal(const MeasurementFrames &f) {
    if (!f.orthogonal) {
        throw std::invalid_argument(
            "protocol requires orthogonal frames (D = d on every factor and "
            "an equally spaced clock)");
    }
}

} // namespace

MeasurementFrames orthogonal_frames(const GlobalState &g) {
    const auto s = line_slots(g);
    if (!g.clock->commensurate || !g.clock->equally_spaced()) {
        throw std::invalid_argument(
            "orthogonal frames need a complete equally spaced clock ladder");
    }
    const auto &rod = g.factors[s.rod];
    const auto &sys = g.factors[s.sys];
    MeasurementFrames f;
    f.clock = FrameGrid::discrete(static_cast<int>(g.clock->d()), 0.0, g.clock->T);
    f.rod = FrameGrid::discrete(static_cast<int>(rod.dim()), 0.0, rod.period);
    f.sys = FrameGrid::discrete(static_cast<int>(sys.dim()), 0.0, sys.period);
    f.orthogonal = true;
    return f;
}

MeasurementFrames povm_frames(const GlobalState &g, int D_clock, int D_rod,
                              int D_sys) {
    const auto s = line_slots(g);
    if (!g.clock->commensurate) {
        throw std::invalid_argument("discrete clock readings need a commensurate clock");
    }
    const auto &rod = g.factors[s.rod];
    const auto &sys = g.factors[s.sys];
    if (D_clock < static_cast<int>(default_clock_grid(*g.clock).D) ||
        D_rod < static_cast<int>(rod.dim()) || D_sys < static_cast<int>(sys.dim())) {
        throw std::invalid_argument("reading grids need D >= d");
    }
    MeasurementFrames f;
    f.clock = FrameGrid::discrete(D_clock, 0.0, g.clock->T);
    f.rod = FrameGrid::discrete(D_rod, 0.0, rod.period);
    f.sys = FrameGrid::discrete(D_sys, 0.0, sys.period);
    f.orthogonal = D_clock == static_cast<int>(g.clock->d()) &&
                   g.clock->equally_spaced() &&
                   D_rod == static_cast<int>(rod.dim()) &&
                   D_sys == static_cast<int>(sys.dim());
    return f;
}

namespace {

double gppt_joint(const GlobalState &g, const Slots &s, const MeasurementFrames &f,
                  const MeasurementEvent &e) {
    const double t = f.clock.point(e.m);
    const double x = f.rod.point(e.j);
    const double y = f.sys.point(e.l);
    const auto &cf = g.factors[s.clock];
    const auto &rf = g.factors[s.rod];
    const auto &sf = g.factors[s.sys];
    cplx amp{};
    for (const auto &term : g.terms) {
        const double E = cf.levels[term.index[s.clock]];
        const double q = rf.levels[term.index[s.rod]];
        const double p = sf.levels[term.index[s.sys]];
        amp += term.c * std::exp(kI * (E * t - sign_of(rf) * q * x -
                                       sign_of(sf) * p * y));
    }
    return std::norm(amp) / (static_cast<double>(f.rod.D) * f.sys.D);
}

struct ThetaGrid {
    std::size_t samples = 1;
    double period = 1.0;
};

std::optional<ThetaGrid> theta_grid(const Eigen::VectorXd &evals) {
    std::vector<double> distinct;
    const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        if (distinct.empty() || evals[i] - distinct.back() > 1e-9 * scale) {
            distinct.push_back(evals[i]);
        }
    }
    if (distinct.size() < 2) {
        return ThetaGrid{};
    }
    try {
        const auto c = clock_from_values(distinct, 1e-9, 10000);
        if (c.r_max() > 20000) {
            return std::nullopt;
        }
        return ThetaGrid{static_cast<std::size_t>(4 * c.r_max() + 1), c.T};
    } catch (const std::domain_error &) {
        return std::nullopt;
    }
}

} // namespace

GpptSingle gppt_single(const GlobalState &g, const MeasurementFrames &f,
                       const MeasurementEvent &e) {
    const auto s = line_slots(g);
    if (g.factors.size() != 3) {
        throw std::invalid_argument("gppt_single: expected clock, rod and system only");
    }
    GpptSingle out;
    out.closed_form = gppt_joint(g, s, f, e);
    double marginal = 0.0;
    for (int l = 0; l < f.sys.D; ++l) {
        marginal += gppt_joint(g, s, f, {e.m, e.j, l});
    }
    out.conditioned = out.closed_form / marginal;

    // Trace of the reading projectors in the Heisenberg picture, averaged
    // over one common period of the total Hamiltonian.
    std::vector<LinearOperator> ops;
    for (Role r : {Role::Clock, Role::Rod, Role::System}) {
        for (auto &op : energy_operators(g, r)) {
            ops.push_back(std::move(op));
        }
    }
    const auto shape = g.shape();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(embed_sum(ops, shape));
    const auto grid = theta_grid(es.eigenvalues());
    if (!grid) {
        spdlog::warn("gppt_single: total spectrum is not commensurate; "
                     "reporting the closed form only");
        out.commensurate = false;
        return out;
    }
    out.theta_samples = grid->samples;
    const auto &cf = g.factors[s.clock];
    const auto &rf = g.factors[s.rod];
    const auto &sf = g.factors[s.sys];
    const auto tk = time_state(*g.clock, f.clock, f.clock.point(e.m));
    const auto xk = frame_state_discrete(spectrum_of(rf), f.rod, e.j, rf.sign);
    const auto yk = frame_state_discrete(spectrum_of(sf), f.sys, e.l, sf.sign);
    const auto full = tensor(tk, tensor(xk, yk));
    const double w_clock = static_cast<double>(cf.dim()) / f.clock.D;
    const double w_rest = static_cast<double>(rf.dim()) / f.rod.D *
                          static_cast<double>(sf.dim()) / f.sys.D;
    const auto psi = g.dense();
    const CVector coeffs = es.eigenvectors().adjoint() * psi.amplitudes();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n < grid->samples; ++n) {
        const double theta =
            grid->period * static_cast<double>(n) / static_cast<double>(grid->samples);
        const CVector phases =
            (-kI * theta * es.eigenvalues().cast<cplx>()).array().exp();
        const StateVector v(shape, es.eigenvectors() * phases.cwiseProduct(coeffs));
        num += w_clock * w_rest * std::norm(inner(full, v));
        den += w_clock * std::pow(condition(v, 0, tk).norm(), 2);
    }
    out.theta_average = num / den;
    return out;
}

TwoTime gppt_two_time(const GlobalState &g, const MeasurementFrames &f,
                      const MeasurementEvent &first,
                      const MeasurementEvent &second) {
    require_orthogonal(f);
    const auto s = line_slots(g);
    if (second.m < first.m) {
        throw std::invalid_argument("gppt_two_time: second reading precedes the first");
    }
    const auto sec = sector_of(g, s);
    const double dt = f.clock.point(second.m) - f.clock.point(first.m);
    const double d_i = f.sys.point(first.l) - f.rod.point(first.j);
    const double d_f = f.sys.point(second.l) - f.rod.point(second.j);
    const int sg = sign_of(g.factors[s.sys]);
    cplx amp{};
    for (std::size_t k = 0; k < sec.p.size(); ++k) {
        amp += std::exp(-kI * (sec.eps[k] * dt + sg * sec.p[k] * (d_f - d_i)));
    }
    const double dr = g.factors[s.rod].dim();
    const double ds = g.factors[s.sys].dim();
    TwoTime out;
    out.joint = std::norm(amp) / (dr * dr * ds * ds);
    out.conditioned = out.joint * dr * dr;
    return out;
}

GlobalState glm_build(const GlobalState &g, const MeasurementFrames &f,
                      const MemoryLayout &layout) {
    require_orthogonal(f);
    const auto s = line_slots(g);
    if (layout.times.empty()) {
        return g;
    }
    if (layout.times.size() > 2) {
        throw std::invalid_argument("glm_build: at most two records are supported");
    }
    if (g.factors.size() != 3) {
        throw std::invalid_argument("glm_build: expected clock, rod and system only");
    }
    std::vector<int> rec;
    for (double t : layout.times) {
        rec.push_back(f.clock.index_of(t));
    }
    if (rec.size() == 2 && rec[1] <= rec[0]) {
        throw std::invalid_argument("glm_build: record times must increase");
    }
    const auto sec = sector_of(g, s);
    const std::size_t K = sec.p.size();
    const auto &cf = g.factors[s.clock];
    const int sg = sign_of(g.factors[s.sys]);
    const int dR = f.rod.D;
    const int dS = f.sys.D;
    const double norm_xy = 1.0 / std::sqrt(static_cast<double>(dR) * dS);

    // Amplitudes of |Psi> in the sector at clock time zero.
    std::vector<cplx> a0(K);
    for (const auto &term : g.terms) {
        const auto k = std::find(sec.sys.begin(), sec.sys.end(), term.index[s.sys]) -
                       sec.sys.begin();
        if (static_cast<std::size_t>(k) == K ||
            sec.rod[static_cast<std::size_t>(k)] != term.index[s.rod]) {
            throw std::invalid_argument("glm_build: state leaves the zero-momentum sector");
        }
        a0[static_cast<std::size_t>(k)] += term.c;
    }
    (void)cf;

    struct Branch {
        std::vector<std::size_t> symbols;
        std::vector<cplx> a;
    };
    auto evolve_branch = [&](Branch &b, double dt) {
        for (std::size_t k = 0; k < K; ++k) {
            b.a[k] *= std::exp(-kI * (sec.eps[k] * dt));
        }
    };
    const std::size_t ready_r = static_cast<std::size_t>(dR);
    const std::size_t ready_s = static_cast<std::size_t>(dS);

    std::map<std::vector<std::size_t>, cplx> acc;
    const int dC = f.clock.D;
    for (int m = 0; m < dC; ++m) {
        std::vector<Branch> branches{{{}, a0}};
        for (std::size_t r = 0; r < rec.size(); ++r) {
            branches[0].symbols.push_back(ready_r);
            branches[0].symbols.push_back(ready_s);
        }
        double now = 0.0;
        for (std::size_t r = 0; r < rec.size() && rec[r] <= m; ++r) {
            const double tr = f.clock.point(rec[r]);
            std::vector<Branch> next;
            for (auto &b : branches) {
                evolve_branch(b, tr - now);
                for (int j = 0; j < dR; ++j) {
                    for (int l = 0; l < dS; ++l) {
                        const double x = f.rod.point(j);
                        const double y = f.sys.point(l);
                        cplx alpha{};
                        for (std::size_t k = 0; k < K; ++k) {
                            alpha += norm_xy * sector_bra(sec, k, sg, x, y) * b.a[k];
                        }
                        Branch nb{b.symbols, std::vector<cplx>(K)};
                        nb.symbols[2 * r] = static_cast<std::size_t>(j);
                        nb.symbols[2 * r + 1] = static_cast<std::size_t>(l);
                        for (std::size_t k = 0; k < K; ++k) {
                            nb.a[k] = std::sqrt(static_cast<double>(dR)) * norm_xy *
                                      std::conj(sector_bra(sec, k, sg, x, y)) * alpha;
                        }
                        next.push_back(std::move(nb));
                    }
                }
            }
            branches = std::move(next);
            now = tr;
        }
        const double tm = f.clock.point(m);
        for (auto &b : branches) {
            evolve_branch(b, tm - now);
        }
        // |t_m> expanded in the clock energy basis.
        for (std::size_t i = 0; i < cf.dim(); ++i) {
            const cplx w = std::exp(-kI * (cf.levels[i] * tm)) / static_cast<double>(dC);
            for (const auto &b : branches) {
                for (std::size_t k = 0; k < K; ++k) {
                    if (b.a[k] == cplx{}) {
                        continue;
                    }
                    std::vector<std::size_t> idx{i, sec.rod[k], sec.sys[k]};
                    idx.insert(idx.end(), b.symbols.begin(), b.symbols.end());
                    acc[idx] += w * b.a[k];
                }
            }
        }
    }

    GlobalState h;
    h.factors = g.factors;
    for (std::size_t r = 0; r < rec.size(); ++r) {
        for (Role stores : {Role::Rod, Role::System}) {
            const int d = stores == Role::Rod ? dR : dS;
            Factor mf;
            mf.role = Role::Memory;
            mf.basis = BasisKind::Memory;
            for (int v = 0; v < d; ++v) {
                mf.levels.push_back(v);
            }
            mf.levels.push_back(-1.0);
            mf.period = f.clock.point(rec[r]);
            mf.record = static_cast<int>(r);
            mf.stores = stores;
            h.factors.push_back(std::move(mf));
        }
    }
    for (auto &[idx, c] : acc) {
        if (c != cplx{}) {
            h.terms.push_back({c, idx});
        }
    }
    canonicalize(h.terms);
    h.clock = g.clock;
    h.rod_dispersion = g.rod_dispersion;
    h.sys_dispersion = g.sys_dispersion;
    h.report.norm_error = std::abs(h.norm_squared() - 1.0);
    h.report.notes.emplace_back("history state with " + std::to_string(rec.size()) +
                                " measurement record(s)");
    return h;
}

int glm_records(const GlobalState &h) {
    return static_cast<int>(h.slots(Role::Memory).size() / 2);
}

namespace {

int record_index(const GlobalState &h, const MeasurementFrames &f, int record) {
    for (const auto &fac : h.factors) {
        if (fac.role == Role::Memory && fac.record == record) {
            return f.clock.index_of(fac.period);
        }
    }
    throw std::invalid_argument("no such measurement record");
}

double read_weight(const GlobalState &h, const MeasurementFrames &f, double t,
                   std::span<const std::array<int, 3>> memories) {
    std::vector<Reading> r{Reading::clock(f.clock, t)};
    for (const auto &m : memories) {
        r.push_back(Reading::memory(m[0], m[1] == 0 ? Role::Rod : Role::System, m[2]));
    }
    return std::pow(relative_state(h, r).vector.norm(), 2);
}

} // namespace

GlmSingle glm_single_prob(const GlobalState &h, const MeasurementFrames &f,
                          double t, int j, int l) {
    require_orthogonal(f);
    if (glm_records(h) != 1) {
        throw std::invalid_argument("glm_single_prob: expected exactly one record");
    }
    if (f.clock.index_of(t) < record_index(h, f, 0)) {
        throw std::invalid_argument("glm_single_prob: time precedes the record");
    }
    auto joint = [&](int jj, int ll) {
        const std::array<std::array<int, 3>, 2> m{{{0, 0, jj}, {0, 1, ll}}};
        return read_weight(h, f, t, m);
    };
    GlmSingle out;
    out.joint = joint(j, l);
    double marginal = 0.0;
    for (int ll = 0; ll < f.sys.D; ++ll) {
        marginal += joint(j, ll);
    }
    out.conditioned = out.joint / marginal;
    return out;
}

GlmTwoTime glm_two_time_prob(const GlobalState &h, const MeasurementFrames &f,
                             const MeasurementEvent &first,
                             const MeasurementEvent &second) {
    require_orthogonal(f);
    if (glm_records(h) != 2 || record_index(h, f, 0) != first.m ||
        record_index(h, f, 1) != second.m) {
        throw std::invalid_argument("glm_two_time_prob: events do not match the records");
    }
    const double t = f.clock.point(second.m);
    const std::array<std::array<int, 3>, 2> m1{{{0, 0, first.j}, {0, 1, first.l}}};
    const double p_first = read_weight(h, f, t, m1);
    auto ratio = [&](int j, int l) {
        const std::array<std::array<int, 3>, 4> m{
            {{0, 0, first.j}, {0, 1, first.l}, {1, 0, j}, {1, 1, l}}};
        return read_weight(h, f, t, m) / p_first;
    };
    GlmTwoTime out;
    out.history_ratio = ratio(second.j, second.l);
    double marginal = 0.0;
    for (int l = 0; l < f.sys.D; ++l) {
        marginal += ratio(second.j, l);
    }
    out.conditioned = out.history_ratio / marginal;
    const double dr = f.rod.D;
    out.joint = out.conditioned / (dr * dr);
    return out;
}

std::vector<double> memory_marginal(const GlobalState &h,
                                    const MeasurementFrames &f, double t,
                                    int record) {
    (void)record_index(h, f, record);
    std::vector<double> out;
    for (int j = 0; j <= f.rod.D; ++j) {
        for (int l = 0; l <= f.sys.D; ++l) {
            const std::array<std::array<int, 3>, 2> m{{{record, 0, j}, {record, 1, l}}};
            out.push_back(read_weight(h, f, t, m));
        }
    }
    return out;
}

} // namespace relspace
