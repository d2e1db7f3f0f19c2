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
 * Global "universe" states satisfying total momentum and energy
 * constraints, stored as sparse sums over product-basis multi-indices.
 */

#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relspace/frames.hpp"
#include "relspace/tensor.hpp"

namespace relspace {

enum class Role { Clock, Rod, System, Memory, Spin };

std::string_view role_name(Role r);

/// Descriptor of one tensor factor of a universe.
struct Factor {
    Role role = Role::System;
    int axis = 0;
    BasisKind basis = BasisKind::Momentum;
    /// Momentum, energy or memory symbol per basis element. Memory factors
    /// use 0..d-1 for outcomes and -1 for the ready symbol (last element).
    std::vector<double> levels;
    /// Clock momenta when the clock carries momentum; empty otherwise.
    std::vector<double> momenta;
    /// Ladder period L (momentum factors), clock period T, or the clock
    /// time at which a memory factor records its outcome.
    double period = 0.0;
    PhaseSign sign = PhaseSign::Standard;
    /// Oscillator factors: particle mass and frequency.
    double mass = 0.0;
    double frequency = 0.0;
    /// Memory factors: index of the measurement record.
    int record = -1;
    /// Memory factors: role of the subsystem whose reading is stored.
    Role stores = Role::System;

    [[nodiscard]] std::size_t dim() const { return levels.size(); }
};

struct Term {
    cplx c;
    std::vector<std::size_t> index;
};

struct Dispersion {
    enum class Kind { None, Free, Oscillator, RelativisticScalar, Dirac };
    Kind kind = Kind::None;
    double mass = 0.0;
    double frequency = 0.0;
    int sign = 1;

    static Dispersion none() { return {}; }
    static Dispersion free(double mass);
    static Dispersion oscillator(double mass, double frequency);
    static Dispersion relativistic(double mass, int sign);
    static Dispersion dirac(double mass);

    /// Energy of a momentum vector. Dirac returns the positive branch.
    [[nodiscard]] double operator()(std::span<const double> p) const;
    [[nodiscard]] double operator()(double p) const {
        return (*this)(std::span<const double>(&p, 1));
    }
};

struct Residual {
    std::string name;
    double value = 0.0;
};

struct ConstraintReport {
    std::vector<Residual> residuals;
    std::vector<std::string> notes;
    double norm_error = 0.0;

    [[nodiscard]] std::optional<double> value(std::string_view name) const;
    [[nodiscard]] double max() const;
};

struct GlobalState {
    std::vector<Factor> factors;
    std::vector<Term> terms;
    std::optional<ClockSpectrum> clock;
    Dispersion rod_dispersion;
    Dispersion sys_dispersion;
    ConstraintReport report;

    [[nodiscard]] std::vector<std::size_t> shape() const;
    [[nodiscard]] StateVector dense() const;
    [[nodiscard]] std::optional<std::size_t> slot(Role role, int axis = 0) const;
    [[nodiscard]] std::size_t require(Role role, int axis = 0) const;
    [[nodiscard]] std::vector<std::size_t> slots(Role role) const;
    [[nodiscard]] int axes() const;
    [[nodiscard]] double norm_squared() const;
};

struct AxisPair {
    Spectrum rod;
    Spectrum sys;
};

struct ClockOptions {
    /// 0 keeps exactly the needed levels; otherwise the clock becomes a
    /// complete equally spaced ladder with at least this many levels.
    std::size_t ladder_levels = 0;
    /// Accept level ratios that are not rational (continuous time only).
    bool allow_incommensurate = false;
};

/// Merge terms with equal multi-index and sort them canonically.
void canonicalize(std::vector<Term> &terms);

/// Operators whose sum is the energy of the given part of the universe.
std::vector<LinearOperator> energy_operators(const GlobalState &g, Role part);
/// Operators whose sum is the total momentum along @p axis.
std::vector<LinearOperator> momentum_operators(const GlobalState &g, int axis);
/// ||sum_i op_i |Psi>|| evaluated on the dense tensor.
double residual_norm(const GlobalState &g, std::span<const LinearOperator> ops);
/// Fills momentum residuals per axis and, when a clock exists, the energy
/// residual, by dense operator application.
void compute_constraint_report(GlobalState &g, bool energy = true);

GlobalState momentum_constrained_state(const Spectrum &rod, const Spectrum &sys,
                                       std::span<const cplx> coeffs);

GlobalState double_constrained_state(const Dispersion &rod_disp,
                                     const Dispersion &sys_disp,
                                     const Spectrum &rod, const Spectrum &sys,
                                     std::span<const cplx> coeffs,
                                     const ClockOptions &opts = {});

/// Universe over one to three spatial axes; @p coeffs is row-major over
/// the system levels of every axis.
GlobalState universe_3plus1(std::span<const AxisPair> axes,
                            const Dispersion &rod_disp,
                            const Dispersion &sys_disp,
                            std::span<const cplx> coeffs,
                            const ClockOptions &opts = {});

struct MomentumClock {
    std::vector<double> momenta;
    std::vector<double> energies;
};

struct ClockMomentumSearch {
    std::optional<GlobalState> state;
    std::vector<std::array<std::size_t, 3>> solutions;
    /// |p_C + p_R + p_S| and |E_C + E_R + E_S| for every triple, in
    /// canonical (clock, rod, system) order.
    std::vector<double> momentum_residuals;
    std::vector<double> energy_residuals;
};

ClockMomentumSearch nonzero_clock_momentum_state(
    const MomentumClock &clock, const Spectrum &rod, const Spectrum &sys,
    const Dispersion &rod_disp, const Dispersion &sys_disp,
    double tol = 1e-12);

/// Random unit vector with Gaussian components.
std::vector<cplx> random_unit_vector(std::mt19937_64 &rng, std::size_t n,
                                     bool real_only = false);

namespace detail {

struct PendingTerm {
    cplx c;
    double level = 0.0;
    std::vector<std::size_t> index;
};

/// Builds the clock from the distinct levels of @p terms and prepends it.
GlobalState assemble(std::vector<Factor> spatial, std::vector<PendingTerm> terms,
                     bool with_clock, const ClockOptions &opts);

Factor momentum_factor(Role role, int axis, const Spectrum &s,
                       PhaseSign sign = PhaseSign::Standard);

std::size_t partner_level(const Spectrum &rod, double p, int axis);

void require_normalized(std::span<const cplx> coeffs);

bool same_level(double a, double b);

} // namespace detail

} // namespace relspace
