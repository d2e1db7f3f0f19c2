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
 * Momentum and energy ladders, and the POVM reading states of rods and
 * clocks built on them.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "relspace/tensor.hpp"

namespace relspace {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

using Rational = boost::rational<std::int64_t>;

/// Equally spaced ladder p_k = p0 + 2*pi*k/L.
struct Spectrum {
    int d = 1;
    double p0 = 0.0;
    double L = kTwoPi;
    std::vector<double> values;

    [[nodiscard]] double spacing() const { return kTwoPi / L; }
    /// Index of the level equal to @p value within a relative tolerance.
    [[nodiscard]] std::optional<std::size_t> find(double value,
                                                  double tol = 1e-9) const;
};

Spectrum momentum_spectrum(int d, double p0, double L);

/// Sign of the exponent in |x> = sum_k e^{s i p_k x}|p_k>. The standard
/// convention uses s = -1; the mirrored one (used by relativistic frames)
/// uses s = +1.
enum class PhaseSign : int { Standard = -1, Mirrored = 1 };

/// Uniform reading grid over one period, or the continuous interval.
struct FrameGrid {
    int D = 1;
    double origin = 0.0;
    double period = kTwoPi;
    bool continuous = false;

    static FrameGrid discrete(int D, double origin, double period);
    static FrameGrid interval(double origin, double period);

    [[nodiscard]] double step() const { return period / D; }
    [[nodiscard]] double point(int j) const;
    /// Grid index of @p value; throws when the value is off-grid.
    [[nodiscard]] int index_of(double value, double tol = 1e-9) const;
    /// Wrap @p value into [origin, origin + period).
    [[nodiscard]] double wrap(double value) const;
};

/// |x_j> = (1/sqrt d) sum_k e^{s i p_k x_j} |p_k>.
StateVector frame_state_discrete(const Spectrum &s, const FrameGrid &g, int j,
                                 PhaseSign sign = PhaseSign::Standard);

/// |x> = sum_k e^{s i p_k x} |p_k>, squared norm d. Readings outside the
/// period starting at @p origin are wrapped with a warning.
StateVector frame_state_continuous(const Spectrum &s, double x,
                                   double origin = 0.0,
                                   PhaseSign sign = PhaseSign::Standard);

/// Max-norm of (d/D) sum_j |x_j><x_j| - 1.
double identity_residual(const Spectrum &s, const FrameGrid &g);

/// Max over level pairs of |sum_j e^{-i x_j (p_k - p_n)} - D delta_kn|.
double delta_sum_residual(const Spectrum &s, const FrameGrid &g);

/// Max over level pairs of |int_{y0}^{y0+L} e^{i y (p_k - p_n)} dy - L delta_kn|,
/// evaluated in closed form.
double delta_integral_residual(const Spectrum &s, double origin);

struct ClockSpectrum {
    double E0 = 0.0;
    std::vector<Rational> ratios;  ///< (E_i - E_0)/(E_1 - E_0)
    std::vector<std::int64_t> r;   ///< integer multiples of the base gap
    double T = kTwoPi;             ///< period 2*pi*r_1/(E_1 - E_0)
    std::vector<double> values;    ///< level energies in increasing order
    bool commensurate = true;

    [[nodiscard]] std::size_t d() const { return values.size(); }
    [[nodiscard]] std::int64_t r_max() const { return r.empty() ? 0 : r.back(); }
    [[nodiscard]] double gap() const { return kTwoPi / T; }
    /// True when the levels form a complete equally spaced ladder.
    [[nodiscard]] bool equally_spaced() const;
};

/// Exact construction from rational energies (strictly increasing).
ClockSpectrum clock_from_energies(std::span<const Rational> energies);

/// Construction from floating energies; ratios are recovered by continued
/// fractions and must match to @p tol relative. Throws std::domain_error
/// when a ratio is not rational within the denominator bound.
ClockSpectrum clock_from_values(std::span<const double> energies,
                                double tol = 1e-12,
                                std::int64_t max_denominator = 1000000);

/// Levels without a common period; usable only with continuous readings.
ClockSpectrum clock_incommensurate(std::span<const double> energies);

/// Best rational approximation with bounded denominator.
std::optional<Rational> rationalize(double x, double tol,
                                    std::int64_t max_denominator);

/// Complete ladder E0 + n*gap for n = 0..levels-1 sharing the period of @p c.
ClockSpectrum clock_ladder(const ClockSpectrum &c, std::size_t levels);

/// Default grid: D = max(d_C, r_max + 1) points over one period.
FrameGrid default_clock_grid(const ClockSpectrum &c, double origin = 0.0);

/// |t> = (1/sqrt d_C) sum_i e^{-i E_i t}|E_i> on a discrete grid, or the
/// unnormalized continuous form when @p g is continuous.
StateVector time_state(const ClockSpectrum &c, const FrameGrid &g, double t);

/// Max-norm of (d_C/D_C) sum_m |t_m><t_m| - 1.
double clock_identity_residual(const ClockSpectrum &c, const FrameGrid &g);

} // namespace relspace
