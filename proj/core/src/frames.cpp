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
#include "relspace/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <spdlog/spdlog.h>

namespace relspace {

std::optional<std::size_t> Spectrum::find(double value, double tol) const {
    const double scale = std::max(1.0, std::abs(value));
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (std::abs(values[k] - value) <= tol * scale) {
            return k;
        }
    }
    return std::nullopt;
}

Spectrum momentum_spectrum(int d, double p0, double L) {
    if (d < 1) {
        throw std::invalid_argument("momentum_spectrum: d must be >= 1");
    }
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw std::invalid_argument("momentum_spectrum: L must be positive");
    }
    Spectrum s{d, p0, L, {}};
    s.values.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        s.values.push_back(p0 + kTwoPi * k / L);
    }
    return s;
}

FrameGrid FrameGrid::discrete(int D, double origin, double period) {
    if (D < 1) {
        throw std::invalid_argument("FrameGrid: D must be >= 1");
    }
    if (!(period > 0.0)) {
        throw std::invalid_argument("FrameGrid: period must be positive");
    }
    return {D, origin, period, false};
}

FrameGrid FrameGrid::interval(double origin, double period) {
    if (!(period > 0.0)) {
        throw std::invalid_argument("FrameGrid: period must be positive");
    }
    return {0, origin, period, true};
}

double FrameGrid::point(int j) const {
    if (continuous) {
        throw std::logic_error("FrameGrid::point on a continuous grid");
    }
    if (j < 0 || j >= D) {
        throw std::out_of_range("FrameGrid: index " + std::to_string(j) +
                                " outside [0, " + std::to_string(D) + ")");
    }
    return origin + period * j / D;
}

int FrameGrid::index_of(double value, double tol) const {
    if (continuous) {
        throw std::logic_error("FrameGrid::index_of on a continuous grid");
    }
    const double u = (value - origin) / step();
    const double j = std::round(u);
    if (std::abs(u - j) > tol * std::max(1.0, std::abs(u)) || j < 0 || j >= D) {
        throw std::out_of_range("reading " + std::to_string(value) +
                                " is not on the frame grid");
    }
    return static_cast<int>(j);
}

double FrameGrid::wrap(double value) const {
    double u = std::fmod(value - origin, period);
    if (u < 0) {
        u += period;
    }
    return origin + u;
}

namespace {

StateVector phase_ket(const std::vector<double> &levels, double x, int sign,
                      double amp, BasisKind kind, NormConvention conv) {
    CVector a(static_cast<Eigen::Index>(levels.size()));
    for (std::size_t k = 0; k < levels.size(); ++k) {
        a[static_cast<Eigen::Index>(k)] =
            amp * std::exp(kI * (sign * levels[k] * x));
    }
    return {{levels.size()}, std::move(a), {FactorLabels{kind, levels}}, conv};
}

} // namespace

StateVector frame_state_discrete(const Spectrum &s, const FrameGrid &g, int j,
                                 PhaseSign sign) {
    if (g.continuous) {
        throw std::invalid_argument(
            "frame_state_discrete: grid is continuous");
    }
    const double x = g.point(j);
    return phase_ket(s.values, x, static_cast<int>(sign),
                     1.0 / std::sqrt(static_cast<double>(s.d)),
                     BasisKind::Momentum, NormConvention::Unit);
}

StateVector frame_state_continuous(const Spectrum &s, double x, double origin,
                                   PhaseSign sign) {
    if (x < origin || x > origin + s.L) {
        const double w = FrameGrid::interval(origin, s.L).wrap(x);
        spdlog::warn("frame reading {} outside [{}, {}] wrapped to {}", x,
                     origin, origin + s.L, w);
        x = w;
    }
    return phase_ket(s.values, x, static_cast<int>(sign), 1.0,
                     BasisKind::Momentum, NormConvention::Continuum);
}

double identity_residual(const Spectrum &s, const FrameGrid &g) {
    if (g.continuous || g.D < s.d) {
        throw std::invalid_argument(
            "identity_residual: grid needs D >= d discrete points");
    }
    const auto d = static_cast<Eigen::Index>(s.d);
    CMatrix acc = CMatrix::Zero(d, d);
    for (int j = 0; j < g.D; ++j) {
        const auto v = frame_state_discrete(s, g, j).amplitudes();
        acc += v * v.adjoint();
    }
    acc *= static_cast<double>(s.d) / g.D;
    return (acc - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

double delta_sum_residual(const Spectrum &s, const FrameGrid &g) {
    double worst = 0.0;
    for (int k = 0; k < s.d; ++k) {
        for (int n = 0; n < s.d; ++n) {
            cplx acc{};
            const double dp = s.values[static_cast<std::size_t>(k)] -
                              s.values[static_cast<std::size_t>(n)];
            for (int j = 0; j < g.D; ++j) {
                acc += std::exp(-kI * (g.point(j) * dp));
            }
            const double expect = (k == n) ? g.D : 0.0;
            worst = std::max(worst, std::abs(acc - expect));
        }
    }
    return worst;
}

double delta_integral_residual(const Spectrum &s, double origin) {
    double worst = 0.0;
    for (int k = 0; k < s.d; ++k) {
        for (int n = 0; n < s.d; ++n) {
            cplx val;
            if (k == n) {
                val = s.L;
            } else {
                const double dp = s.values[static_cast<std::size_t>(k)] -
                                  s.values[static_cast<std::size_t>(n)];
                val = (std::exp(kI * (dp * (origin + s.L))) -
                       std::exp(kI * (dp * origin))) /
                      (kI * dp);
            }
            const double expect = (k == n) ? s.L : 0.0;
            worst = std::max(worst, std::abs(val - expect));
        }
    }
    return worst;
}

std::optional<Rational> rationalize(double x, double tol,
                                    std::int64_t max_denominator) {
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    const double scale = std::max(1.0, std::abs(x));
    // Continued-fraction convergents h/k.
    std::int64_t h0 = 0;
    std::int64_t h1 = 1;
    std::int64_t k0 = 1;
    std::int64_t k1 = 0;
    double rem = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(rem);
        if (std::abs(a) > 9.0e15) {
            break;
        }
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0;
        const std::int64_t k2 = ai * k1 + k0;
        if (k2 > max_denominator) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <=
            tol * scale) {
            return Rational(h1, k1);
        }
        const double frac = rem - a;
        if (frac == 0.0) {
            break;
        }
        rem = 1.0 / frac;
    }
    return std::nullopt;
}

namespace {

ClockSpectrum from_ratios(double e0, double e1, std::vector<Rational> ratios) {
    ClockSpectrum c;
    c.E0 = e0;
    c.ratios = std::move(ratios);
    std::int64_t r1 = 1;
    for (std::size_t i = 1; i < c.ratios.size(); ++i) {
        r1 = std::lcm(r1, c.ratios[i].denominator());
    }
    c.r.assign(c.ratios.size(), 0);
    for (std::size_t i = 1; i < c.ratios.size(); ++i) {
        const Rational ri = c.ratios[i] * Rational(r1);
        if (ri.denominator() != 1) {
            throw std::logic_error("clock: non-integer level multiple");
        }
        c.r[i] = ri.numerator();
    }
    c.T = c.ratios.size() > 1 ? kTwoPi * static_cast<double>(r1) / (e1 - e0)
                              : kTwoPi;
    return c;
}

void require_increasing(std::span<const double> e) {
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (!(e[i] > e[i - 1])) {
            throw std::invalid_argument(
                "clock energies must be strictly increasing");
        }
    }
}

} // namespace

bool ClockSpectrum::equally_spaced() const {
    if (!commensurate) {
        return false;
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] != static_cast<std::int64_t>(i)) {
            return false;
        }
    }
    return true;
}

ClockSpectrum clock_from_energies(std::span<const Rational> energies) {
    if (energies.empty()) {
        throw std::invalid_argument("clock_from_energies: no levels");
    }
    for (std::size_t i = 1; i < energies.size(); ++i) {
        if (!(energies[i] > energies[i - 1])) {
            throw std::invalid_argument(
                "clock energies must be strictly increasing");
        }
    }
    std::vector<Rational> ratios{Rational(0)};
    for (std::size_t i = 1; i < energies.size(); ++i) {
        ratios.push_back((energies[i] - energies[0]) /
                         (energies[1] - energies[0]));
    }
    const double e0 = boost::rational_cast<double>(energies[0]);
    const double e1 = energies.size() > 1
                          ? boost::rational_cast<double>(energies[1])
                          : e0;
    ClockSpectrum c = from_ratios(e0, e1, std::move(ratios));
    // Rebuild the energies from the integer multiples, exactly in rationals,
    // and only then convert to floating point.
    const Rational gap = energies.size() > 1
                             ? (energies[1] - energies[0]) / Rational(c.r[1])
                             : Rational(0);
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const Rational e = energies[0] + gap * Rational(c.r[i]);
        if (e != energies[i]) {
            throw std::logic_error("clock reconstruction is not exact");
        }
        c.values.push_back(boost::rational_cast<double>(e));
    }
    return c;
}

ClockSpectrum clock_from_values(std::span<const double> energies, double tol,
                                std::int64_t max_denominator) {
    if (energies.empty()) {
        throw std::invalid_argument("clock_from_values: no levels");
    }
    require_increasing(energies);
    std::vector<Rational> ratios{Rational(0)};
    for (std::size_t i = 1; i < energies.size(); ++i) {
        const double x = (energies[i] - energies[0]) / (energies[1] - energies[0]);
        auto q = rationalize(x, tol, max_denominator);
        if (!q) {
            throw std::domain_error(
                "clock level ratio " + std::to_string(x) +
                " is not rational within tolerance; irrational clocks are "
                "not supported");
        }
        ratios.push_back(*q);
    }
    ClockSpectrum c =
        from_ratios(energies[0], energies.size() > 1 ? energies[1] : energies[0],
                    std::move(ratios));
    c.values.assign(energies.begin(), energies.end());
    return c;
}

ClockSpectrum clock_incommensurate(std::span<const double> energies) {
    if (energies.empty()) {
        throw std::invalid_argument("clock_incommensurate: no levels");
    }
    require_increasing(energies);
    ClockSpectrum c;
    c.E0 = energies[0];
    c.values.assign(energies.begin(), energies.end());
    c.commensurate = false;
    c.T = 0.0;
    return c;
}

ClockSpectrum clock_ladder(const ClockSpectrum &c, std::size_t levels) {
    if (!c.commensurate) {
        throw std::invalid_argument("clock_ladder: clock is incommensurate");
    }
    if (levels < static_cast<std::size_t>(c.r_max()) + 1) {
        throw std::invalid_argument(
            "clock_ladder: ladder must contain every existing level");
    }
    ClockSpectrum out;
    out.E0 = c.E0;
    out.T = c.T;
    const double gap = c.gap();
    for (std::size_t n = 0; n < levels; ++n) {
        out.ratios.emplace_back(static_cast<std::int64_t>(n));
        out.r.push_back(static_cast<std::int64_t>(n));
        out.values.push_back(c.E0 + gap * static_cast<double>(n));
    }
    // Keep the original floating values where levels coincide.
    for (std::size_t i = 0; i < c.r.size(); ++i) {
        out.values[static_cast<std::size_t>(c.r[i])] = c.values[i];
    }
    return out;
}

FrameGrid default_clock_grid(const ClockSpectrum &c, double origin) {
    if (!c.commensurate) {
        throw std::invalid_argument(
            "default_clock_grid: incommensurate clock has no period");
    }
    const auto D = std::max<std::int64_t>(static_cast<std::int64_t>(c.d()),
                                          c.r_max() + 1);
    return FrameGrid::discrete(static_cast<int>(D), origin, c.T);
}

StateVector time_state(const ClockSpectrum &c, const FrameGrid &g, double t) {
    if (g.continuous) {
        return phase_ket(c.values, t, -1, 1.0, BasisKind::Energy,
                         NormConvention::Continuum);
    }
    return phase_ket(c.values, t, -1,
                     1.0 / std::sqrt(static_cast<double>(c.d())),
                     BasisKind::Energy, NormConvention::Unit);
}

double clock_identity_residual(const ClockSpectrum &c, const FrameGrid &g) {
    if (g.continuous) {
        throw std::invalid_argument(
            "clock_identity_residual: discrete grid required");
    }
    const auto d = static_cast<Eigen::Index>(c.d());
    CMatrix acc = CMatrix::Zero(d, d);
    for (int m = 0; m < g.D; ++m) {
        const auto v = time_state(c, g, g.point(m)).amplitudes();
        acc += v * v.adjoint();
    }
    acc *= static_cast<double>(c.d()) / g.D;
    return (acc - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

} // namespace relspace
