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
#include "relspace/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "relspace/oracle.hpp"
#include "relspace/oscillator.hpp"
#include "relspace/relativistic.hpp"
#include "relspace/samples.hpp"
#include "relspace/scenario.hpp"

namespace relspace {

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check &c) { return c.passed; });
}

std::vector<std::string> VerifyReport::failures() const {
    std::vector<std::string> out;
    for (const auto &c : checks) {
        if (!c.passed) {
            out.push_back(c.module + "/" + c.name);
        }
    }
    return out;
}

const std::vector<std::string> &verify_modules() {
    static const std::vector<std::string> names{
        "tensor-core", "frames",       "universe",    "relational",
        "measurements", "relativistic", "scenario-cli"};
    return names;
}

namespace {

class Suite {
  public:
    Suite(VerifyReport &rep, std::string module)
        : rep_(rep), module_(std::move(module)) {}

    void expect_below(const std::string &name, const std::string &anchor,
                      double residual, double tol) {
        const bool ok = std::isfinite(residual) && residual <= tol;
        rep_.checks.push_back({module_, name, anchor, residual, tol, ok, {}});
    }

    void expect_near(const std::string &name, const std::string &anchor,
                     double value, double target, double tol) {
        const double r = std::abs(value - target);
        const bool ok = std::isfinite(value) && r <= tol;
        rep_.checks.push_back({module_, name, anchor, value, tol, ok,
                               "target " + format_double(target)});
    }

    // Runs @p body, recording a failed check when it throws.
    void guarded(const std::string &name, const std::string &anchor,
                 const std::function<void()> &body) {
        try {
            body();
        } catch (const std::exception &e) {
            rep_.checks.push_back({module_, name, anchor,
                                   std::numeric_limits<double>::quiet_NaN(),
                                   0.0, false, e.what()});
        }
    }

  private:
    VerifyReport &rep_;
    std::string module_;
};

CMatrix random_hermitian(std::mt19937_64 &rng, std::size_t n) {
    const auto v = random_unit_vector(rng, n * n);
    CMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n * n; ++i) {
        a(static_cast<Eigen::Index>(i / n), static_cast<Eigen::Index>(i % n)) = v[i];
    }
    return a + a.adjoint();
}

void tensor_suite(Suite &s, std::mt19937_64 &rng) {
    s.guarded("unitary", "Eq36", [&] {
        const CMatrix h = random_hermitian(rng, 6);
        const CMatrix u = unitary(h, 0.7);
        s.expect_below("unitary", "Eq36",
                       (u.adjoint() * u - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(),
                       1e-12);
        s.expect_below("group-law", "Eq36",
                       (unitary(h, 1.1) - unitary(h, 0.4) * u).cwiseAbs().maxCoeff(),
                       1e-12);
    });
    s.guarded("partial-condition", "Eq9", [&] {
        const auto a = random_unit_vector(rng, 12);
        const StateVector v({3, 4}, Eigen::Map<const CVector>(a.data(), 12));
        const auto c = condition(v, 1, StateVector::basis({4}, 2));
        double r = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            r = std::max(r, std::abs(c[i] - a[i * 4 + 2]));
        }
        s.expect_below("partial-condition", "Eq9", r, 1e-15);
    });
}

void frames_suite(Suite &s) {
    s.guarded("identity-resolution", "Eq5", [&] {
        double r = 0.0;
        for (int d = 1; d <= 4; ++d) {
            for (int D = d; D <= 8; ++D) {
                const auto sp = momentum_spectrum(d, -1.0, 3.0);
                r = std::max(r, identity_residual(sp, FrameGrid::discrete(D, 0.2, 3.0)));
            }
        }
        s.expect_below("identity-resolution", "Eq5", r, 1e-12);
    });
    s.guarded("clock-identity", "Eq25", [&] {
        const std::array<Rational, 3> e{Rational(0), Rational(1, 2), Rational(3, 2)};
        const auto c = clock_from_energies(e);
        double r = 0.0;
        for (int D = static_cast<int>(c.r_max()) + 1; D <= 10; ++D) {
            r = std::max(r, clock_identity_residual(c, FrameGrid::discrete(D, 0.0, c.T)));
        }
        s.expect_below("clock-identity", "Eq25", r, 1e-12);
    });
    s.guarded("delta-sums", "AppC", [&] {
        const auto sp = momentum_spectrum(4, 0.5, 2.0);
        s.expect_below("delta-sum", "AppC",
                       delta_sum_residual(sp, FrameGrid::discrete(6, 0.0, 2.0)), 1e-12);
        s.expect_below("delta-integral", "AppC", delta_integral_residual(sp, -0.3),
                       1e-12);
    });
}

void universe_suite(Suite &s, std::mt19937_64 &rng) {
    s.guarded("double-constraint", "Eq28", [&] {
        double r = 0.0;
        for (int i = 0; i < 5; ++i) {
            r = std::max(r, random_line_universe(rng, 4, 3).report.max());
        }
        s.expect_below("double-constraint", "Eq28", r, 1e-12);
    });
    s.guarded("constraint-3+1", "Eq84", [&] {
        const auto ax = line_axis({2, 2, kTwoPi, 2.0, 1.0, 0});
        const std::vector<AxisPair> axes(3, ax);
        const auto c = random_unit_vector(rng, 8);
        const auto g = universe_3plus1(axes, Dispersion::free(2.0),
                                       Dispersion::free(1.0), c);
        s.expect_below("constraint-3+1", "Eq84", g.report.max(), 1e-12);
    });
    s.guarded("clock-momentum", "AppD", [&] {
        const MomentumClock clock{{0.0, 1.0}, {-0.75, -0.25}};
        const auto res = nonzero_clock_momentum_state(
            clock, momentum_spectrum(4, -2.0, kTwoPi), momentum_spectrum(3, 0.0, kTwoPi),
            Dispersion::free(2.0), Dispersion::free(1.0));
        if (!res.state) {
            throw std::runtime_error("no solution found");
        }
        s.expect_below("clock-momentum", "AppD", res.state->report.max(), 1e-12);
    });
    s.guarded("oscillator", "Eq63", [&] {
        OscillatorParams p;
        p.M = 2.0;
        p.trunc = 8;
        p.quad.points = 129;
        const auto u = oscillator_universe(p);
        s.expect_below("oscillator-energy", "Eq63",
                       *u.state.report.value("energy"), 1e-8);
        s.expect_below("oscillator-evolution", "Eq65",
                       evolution_oracle_residual(u.state, 0.9), 1e-8);
    });
}

void relational_suite(Suite &s, std::mt19937_64 &rng) {
    s.guarded("bayes-oracle", "Eq17", [&] {
        double r = 0.0;
        for (int i = 0; i < 5; ++i) {
            const auto g = random_line_universe(rng, 5, 4);
            const auto &rf = g.factors[g.require(Role::Rod)];
            const auto &sf = g.factors[g.require(Role::System)];
            const auto rod = FrameGrid::discrete(static_cast<int>(rf.dim()) + 1, 0.0, rf.period);
            const auto sys = FrameGrid::discrete(static_cast<int>(sf.dim()) + 2, 0.0, sf.period);
            const auto clk = default_clock_grid(*g.clock);
            const std::array<Reading, 2> given{Reading::rod(rod, rod.point(1)),
                                               Reading::clock(clk, clk.point(1))};
            const std::array<Reading, 1> out{Reading::system(sys, sys.point(2))};
            r = std::max(r, std::abs(conditional_probability(g, given, out) -
                                     bayes_conditional_dense(g, given, out)));
        }
        s.expect_below("bayes-oracle", "Eq17", r, 1e-12);
    });
    s.guarded("three-level-closed-form", "Eq56", [&] {
        const std::vector<cplx> c{0.6, 0.48, 0.64};
        const LineSpec spec{3, 3, kTwoPi, 2.0, 1.0, -1};
        const auto g = line_universe(spec, c);
        const int D = 8;
        const auto rod = FrameGrid::discrete(D, 0.0, spec.L);
        const auto sys = FrameGrid::discrete(D, 0.0, spec.L);
        const auto clk = FrameGrid::discrete(D, 0.0, g.clock->T);
        double r = 0.0;
        for (int m = 0; m < D; ++m) {
            for (int l = 0; l < D; ++l) {
                const double p = conditional_prob_discrete(g, {rod, 0, sys, l, clk, m});
                const double f = closed_form_3level(0.6, 0.48, 0.64, spec.L, 2.0, 1.0,
                                                    clk.point(m), sys.point(l), D);
                r = std::max(r, std::abs(p - f));
            }
        }
        s.expect_below("three-level-closed-form", "Eq56", r, 1e-12);
    });
    s.guarded("momentum-eigenstate-flat", "Eq16", [&] {
        const std::vector<cplx> c{0.0, 1.0, 0.0};
        const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, 0}, c);
        const auto rod = FrameGrid::discrete(5, 0.0, kTwoPi);
        const auto sys = FrameGrid::discrete(7, 0.0, kTwoPi);
        double r = 0.0;
        for (int l = 0; l < 7; ++l) {
            r = std::max(r, std::abs(conditional_prob_discrete(g, {rod, 2, sys, l, {}, 0}) -
                                     1.0 / 7.0));
        }
        s.expect_below("momentum-eigenstate-flat", "Eq16", r, 1e-12);
    });
    s.guarded("covariance", "Eq42", [&] {
        double tr = 0.0;
        double ev = 0.0;
        for (int i = 0; i < 5; ++i) {
            const auto g = random_line_universe(rng, 5, 4);
            const auto &rf = g.factors[g.require(Role::Rod)];
            const auto rod = FrameGrid::discrete(static_cast<int>(rf.dim()), 0.0, rf.period);
            const auto clk = default_clock_grid(*g.clock);
            const std::array<Reading, 2> a{Reading::rod(rod, rod.point(0)),
                                           Reading::clock(clk, clk.point(1))};
            const std::array<Reading, 2> b{Reading::rod(rod, rod.point(1)),
                                           Reading::clock(clk, clk.point(1))};
            tr = std::max(tr, translation_residual(g, a, b));
            ev = std::max(ev, evolution_residual(g, clk, clk.point(0), clk.point(1)));
        }
        s.expect_below("translation", "Eq42", tr, 1e-12);
        s.expect_below("evolution", "Eq36", ev, 1e-12);
    });
    s.guarded("schrodinger-slope", "Eq39", [&] {
        const auto g = random_line_universe(rng, 4, 3);
        const std::vector<double> hs{1e-2, 5e-3, 2.5e-3, 1.25e-3};
        std::vector<double> rs;
        for (double h : hs) {
            rs.push_back(schrodinger_fd_residual(g, 0.3, h));
        }
        s.expect_near("schrodinger-slope", "Eq39", loglog_slope(hs, rs), 2.0, 0.1);
    });
    s.guarded("speed-limit", "Eq57", [&] {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const auto rep = speed_limit_report(random_line_universe(rng, 4, 3));
            worst = std::max(worst, -rep.mt_margin);
            if (rep.t_orth) {
                worst = std::max(worst, rep.bound - *rep.t_orth);
            }
        }
        s.expect_below("speed-limit", "Eq57", worst, 1e-9);
    });
    s.guarded("uncertainty", "Eq20", [&] {
        double worst = -1.0;
        for (int i = 0; i < 10; ++i) {
            const auto rep = spatial_resolution(random_line_universe(rng, 4, 3));
            if (rep.crossed) {
                worst = std::max(worst, rep.kappa - rep.product);
            }
        }
        s.expect_below("uncertainty", "Eq20", std::max(worst, 0.0), 0.0);
    });
}

void measurements_suite(Suite &s) {
    s.guarded("two-time", "Eq68", [&] {
        const std::vector<cplx> c{0.6, 0.48, 0.64};
        ClockOptions o;
        o.ladder_levels = 9;
        const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, -1}, c, o);
        const auto f = orthogonal_frames(g);
        MemoryLayout lay;
        lay.times = {f.clock.point(1), f.clock.point(3)};
        const auto h = glm_build(g, f, lay);
        double e_gppt = 0.0;
        double e_glm = 0.0;
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l < 3; ++l) {
                for (int l2 = 0; l2 < 3; ++l2) {
                    const MeasurementEvent a{1, j, l};
                    const MeasurementEvent b{3, 1, l2};
                    const double ref = propagator_constrained(g, f, a, b);
                    e_gppt = std::max(e_gppt, std::abs(gppt_two_time(g, f, a, b).joint - ref));
                    e_glm = std::max(e_glm, std::abs(glm_two_time_prob(h, f, a, b).joint - ref));
                }
            }
        }
        s.expect_below("gppt-propagator", "Eq68", e_gppt, 1e-10);
        s.expect_below("glm-propagator", "Eq80", e_glm, 1e-10);
    });
    s.guarded("single-time", "Eq66", [&] {
        const std::vector<cplx> c{0.6, 0.48, 0.64};
        ClockOptions o;
        o.ladder_levels = 4;
        const auto g = line_universe({3, 3, kTwoPi, 2.0, 1.0, -1}, c, o);
        const auto f = orthogonal_frames(g);
        MemoryLayout lay;
        lay.times = {f.clock.point(2)};
        const auto h = glm_build(g, f, lay);
        double e_theta = 0.0;
        double e_glm = 0.0;
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l < 3; ++l) {
                const auto gp = gppt_single(g, f, {2, j, l});
                e_theta = std::max(e_theta, std::abs(gp.theta_average.value_or(-1.0) -
                                                     gp.closed_form));
                e_glm = std::max(e_glm, std::abs(glm_single_prob(h, f, f.clock.point(3), j, l).joint -
                                                 gp.closed_form));
            }
        }
        s.expect_below("theta-average", "Eq66", e_theta, 1e-10);
        s.expect_below("glm-single", "Eq75", e_glm, 1e-12);
        const auto before = memory_marginal(h, f, f.clock.point(1), 0);
        s.expect_near("ready-before-record", "Eq73", before.back(), 1.0, 1e-12);
    });
}

void relativistic_suite(Suite &s, std::mt19937_64 &rng) {
    s.expect_below("clifford", "Eq110", clifford_residual(dirac_algebra()), 1e-14);
    s.guarded("dirac-spectrum", "Eq110", [&] {
        double r = 0.0;
        for (int i = 0; i < 10; ++i) {
            const std::array<double, 3> p{0.3 * i, -0.2 * i, 1.0 - 0.1 * i};
            r = std::max(r, dirac_spectrum_residual(p, 1.0 + 0.1 * i));
        }
        s.expect_below("dirac-spectrum", "Eq110", r, 1e-12);
    });
    const AxisPair ax{momentum_spectrum(3, -2.0, kTwoPi), momentum_spectrum(3, 0.0, kTwoPi)};
    const std::vector<AxisPair> axes{ax};
    const std::vector<Event> ev{{0.3, 0.7}};
    const std::vector<double> hs{0.04, 0.02, 0.01, 0.005};
    s.guarded("klein-gordon-slope", "Eq106", [&] {
        const auto g = kg_universe(axes, 1.0, Branch::Both, random_unit_vector(rng, 6));
        std::vector<double> rs;
        for (double h : hs) {
            rs.push_back(kg_residual(g, {h, h}, ev));
        }
        s.expect_below("klein-gordon-constraint", "Eq103",
                       *g.report.value("klein-gordon"), 1e-12);
        s.expect_near("klein-gordon-slope", "Eq106", loglog_slope(hs, rs), 2.0, 0.1);
    });
    s.guarded("dirac-slope", "Eq113", [&] {
        const auto g = dirac_universe(axes, 1.0, random_unit_vector(rng, 12));
        std::vector<double> rs;
        for (double h : hs) {
            rs.push_back(dirac_residual(g, {h, h}, ev));
        }
        s.expect_below("dirac-constraint", "Eq110", g.report.max(), 1e-12);
        s.expect_near("dirac-slope", "Eq113", loglog_slope(hs, rs), 2.0, 0.1);
    });
    s.guarded("heavy-reference-slope", "Eq50", [&] {
        const std::vector<cplx> c{0.6, 0.48, 0.64};
        const std::vector<double> ratios{10.0, 100.0, 1000.0, 10000.0};
        std::vector<double> rs;
        ClockOptions o;
        o.allow_incommensurate = true;
        for (double q : ratios) {
            const auto g = line_universe({3, 3, kTwoPi, q, 1.0, -1}, c, o);
            const std::array<double, 1> x{0.4};
            rs.push_back(heavy_reference_residual(g, 0.2, x));
        }
        s.expect_near("heavy-reference-slope", "Eq50", loglog_slope(ratios, rs), -1.0, 0.1);
    });
}

void scenario_suite(Suite &s, std::mt19937_64 &rng) {
    s.guarded("shortest-round-trip", "none", [&] {
        std::uniform_real_distribution<double> u(-1e3, 1e3);
        double bad = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = u(rng) * std::pow(10.0, i % 17 - 8);
            const auto txt = format_double(x);
            double y = 0.0;
            std::from_chars(txt.data(), txt.data() + txt.size(), y);
            bad += x == y ? 0.0 : 1.0;
        }
        s.expect_below("shortest-round-trip", "none", bad, 0.0);
    });
    s.guarded("unknown-key-rejected", "none", [&] {
        bool rejected = false;
        try {
            (void)parse_scenario("schema: 1\nuniverse:\n  constructor: line\n  bogus: 1\n");
        } catch (const ConfigError &e) {
            rejected = e.line() == 4;
        }
        s.expect_below("unknown-key-rejected", "none", rejected ? 0.0 : 1.0, 0.0);
    });
}

} // namespace

VerifyReport verify(const VerifyOptions &opts) {
    const auto &mods = verify_modules();
    if (!opts.filter.empty() &&
        std::find(mods.begin(), mods.end(), opts.filter) == mods.end()) {
        throw std::invalid_argument("unknown module filter: " + opts.filter);
    }
    auto want = [&](const std::string &m) {
        return opts.filter.empty() || opts.filter == m;
    };
    struct FaultGuard {
        explicit FaultGuard(bool on) { testing::set_phase_fault(on); }
        ~FaultGuard() { testing::set_phase_fault(false); }
        FaultGuard(const FaultGuard &) = delete;
        FaultGuard &operator=(const FaultGuard &) = delete;
    } guard(opts.inject_phase_fault);

    VerifyReport rep;
    std::mt19937_64 rng(opts.seed);
    if (want("tensor-core")) {
        Suite s(rep, "tensor-core");
        tensor_suite(s, rng);
    }
    if (want("frames")) {
        Suite s(rep, "frames");
        frames_suite(s);
    }
    if (want("universe")) {
        Suite s(rep, "universe");
        universe_suite(s, rng);
    }
    if (want("relational")) {
        Suite s(rep, "relational");
        relational_suite(s, rng);
    }
    if (want("measurements")) {
        Suite s(rep, "measurements");
        measurements_suite(s);
    }
    if (want("relativistic")) {
        Suite s(rep, "relativistic");
        relativistic_suite(s, rng);
    }
    if (want("scenario-cli")) {
        Suite s(rep, "scenario-cli");
        scenario_suite(s, rng);
    }
    return rep;
}

} // namespace relspace
