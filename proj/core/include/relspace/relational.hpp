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
 * Relative states, conditional probabilities and the diagnostics derived
 * from them.
 */

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "relspace/universe.hpp"

namespace relspace {

/// A frame reading: clock time, rod or system position, or a stored memory
/// symbol.
struct Reading {
    Role role = Role::Rod;
    int axis = 0;
    double value = 0.0;
    FrameGrid grid;
    /// Memory readings: record index and the role whose outcome is stored.
    int record = -1;
    Role stores = Role::System;

    static Reading clock(const FrameGrid &g, double t);
    static Reading rod(const FrameGrid &g, double x, int axis = 0);
    static Reading system(const FrameGrid &g, double y, int axis = 0);
    static Reading memory(int record, Role stores, int symbol);
};

/// Continuous reading interval matching a factor's period.
FrameGrid continuous_grid(const Factor &f);

struct RelativeState {
    StateVector vector;
    std::vector<Reading> conditioning;
    std::vector<std::size_t> factors;  ///< universe slots left unconditioned
    double prefactor = 1.0;
};

/// Partial contraction of the universe with the reading bras, multiplied by
/// sqrt(d) for every discrete clock or rod reading.
RelativeState relative_state(const GlobalState &g,
                             std::span<const Reading> readings);

/// Bayes ratio P(outcome | given) of POVM expectations, including the
/// outcome weights d/D (discrete) or 1/L (continuous).
double conditional_probability(const GlobalState &g,
                               std::span<const Reading> given,
                               std::span<const Reading> outcome);

struct ConditionalDistribution {
    enum class Kind { Mass, Density };
    Kind kind = Kind::Mass;
    std::vector<double> grid;
    std::vector<double> probabilities;
    double total = 0.0;
    double interval = 0.0;  ///< integration length for densities
};

struct DiscreteEvent {
    FrameGrid rod;
    int j = 0;
    FrameGrid sys;
    int l = 0;
    std::optional<FrameGrid> clock;
    int m = 0;
};

double conditional_prob_discrete(const GlobalState &g, const DiscreteEvent &e);

/// Density of the system at @p y given the rod at @p x and optionally the
/// clock at @p t, with continuous readings over one period.
double conditional_density(const GlobalState &g, double x,
                           std::optional<double> t, double y);

ConditionalDistribution distribution_discrete(const GlobalState &g,
                                              const FrameGrid &rod, int j,
                                              const FrameGrid &sys,
                                              std::optional<FrameGrid> clock = {},
                                              int m = 0);

/// Density samples on a uniform periodic grid; the rectangle rule used for
/// the total is exact for trigonometric polynomials of the sampled degree.
ConditionalDistribution distribution_density(const GlobalState &g, double x,
                                             std::optional<double> t,
                                             std::size_t points = 0);

/// Three-level free-particle closed form with real coefficients, for a
/// system grid of @p D_S points.
double closed_form_3level(double c0, double c1, double c2, double L, double M,
                          double m, double t, double delta, int D_S = 3);
/// Continuous counterpart with the 1/L prefactor.
double closed_form_3level_density(double c0, double c1, double c2, double L,
                                  double M, double m, double t, double delta);

/// ||psi(x_b) - e^{s i P_S (x_b - x_a)} psi(x_a)||, one shift per rod axis.
double translation_residual(const GlobalState &g, std::span<const Reading> at_a,
                            std::span<const Reading> at_b);

/// ||phi(t_b) - e^{-i(H_R + H_S)(t_b - t_a)} phi(t_a)||.
double evolution_residual(const GlobalState &g, const FrameGrid &clock,
                          double t_a, double t_b);

/// ||i d/dt phi(t) - (H_R + H_S) phi(t)|| with a central difference of step h.
double schrodinger_fd_residual(const GlobalState &g, double t, double h);

/// ||i d/dt psi(t, x) - H_S psi(t, x)|| with a central difference of step h;
/// nonzero only through the neglected rod kinetic energy.
double heavy_reference_residual(const GlobalState &g, double t,
                                std::span<const double> x, double h = 1e-4);

cplx overlap_function(const GlobalState &g, double dx, int axis = 0);

struct ResolutionReport {
    bool crossed = false;
    double dx = 0.0;  ///< first crossing, or the period when none
    double delta_p = 0.0;
    double product = 0.0;
    double threshold = 0.5;
    double kappa = 0.5;
    bool satisfied = false;
};

ResolutionReport spatial_resolution(const GlobalState &g, double threshold = 0.5,
                                    double kappa = 0.5, int axis = 0);

struct SpeedLimitReport {
    double E_RS = 0.0;
    double delta_E = 0.0;
    double bound_ml = 0.0;  ///< pi/(2 E_RS)
    double bound_mt = 0.0;  ///< pi/(2 Delta E)
    double bound = 0.0;
    double period = 0.0;
    std::optional<double> t_orth;
    /// min over [0, pi/(2 Delta E)] of |f(t)| - cos(Delta E t).
    double mt_margin = 0.0;
    bool satisfied = true;
};

/// Overlap <phi(0)|phi(t)> of the clock-conditioned state.
cplx survival_amplitude(const GlobalState &g, double t);

SpeedLimitReport speed_limit_report(const GlobalState &g);

/// Conditional probability in one to three dimensions; @p given holds one
/// rod reading per axis and optionally a clock reading, @p outcome one
/// system reading per axis.
double conditional_3plus1(const GlobalState &g, std::span<const Reading> given,
                          std::span<const Reading> outcome);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

namespace testing {
/// Flips the sign of rod phases in the relational pipeline (mutation
/// testing of the verification suite).
void set_phase_fault(bool on);
bool phase_fault();
} // namespace testing

} // namespace relspace
