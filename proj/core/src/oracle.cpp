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
#include "relspace/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relspace/oscillator.hpp"

namespace relspace {

namespace {

std::size_t target_slot(const GlobalState &g, const Reading &r) {
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        const auto &f = g.factors[i];
        const bool hit = r.role == Role::Memory
                             ? f.role == Role::Memory && f.record == r.record &&
                                   f.stores == r.stores
                             : f.role == r.role && f.axis == r.axis;
        if (hit) {
            return i;
        }
    }
    throw std::invalid_argument("reading targets no factor");
}

Spectrum spectrum_of(const Factor &f) {
    Spectrum s;
    s.d = static_cast<int>(f.dim());
    s.p0 = f.levels.front();
    s.L = f.period;
    s.values = f.levels;
    return s;
}

double prefactor(const Factor &f, const Reading &r) {
    const bool frame =
        f.basis == BasisKind::Momentum || f.basis == BasisKind::Energy;
    return frame && !r.grid.continuous ? std::sqrt(static_cast<double>(f.dim()))
                                       : 1.0;
}

double weight(const Factor &f, const Reading &r) {
    if (f.basis != BasisKind::Momentum && f.basis != BasisKind::Energy) {
        return 1.0;
    }
    return r.grid.continuous ? 1.0 / r.grid.period
                             : static_cast<double>(f.dim()) / r.grid.D;
}

// Contract readings from the highest slot down so lower slots keep their
// positions.
StateVector contract_dense(const GlobalState &g, std::span<const Reading> readings) {
    std::vector<std::pair<std::size_t, const Reading *>> order;
    for (const auto &r : readings) {
        order.emplace_back(target_slot(g, r), &r);
    }
    std::sort(order.begin(), order.end(),
              [](const auto &a, const auto &b) { return a.first > b.first; });
    StateVector v = g.dense();
    for (const auto &[slot, r] : order) {
        v = condition(v, slot, reading_ket(g, *r));
    }
    return v;
}

CMatrix rod_system_hamiltonian(const GlobalState &g) {
    std::vector<LinearOperator> ops;
    for (Role r : {Role::Rod, Role::System}) {
        for (auto &op : energy_operators(g, r)) {
            ops.push_back(std::move(op));
        }
    }
    return embed_sum(ops, g.shape());
}

} // namespace

StateVector reading_ket(const GlobalState &g, const Reading &r) {
    const auto &f = g.factors[target_slot(g, r)];
    switch (f.basis) {
    case BasisKind::Momentum:
        if (r.grid.continuous) {
            return frame_state_continuous(spectrum_of(f), r.value, r.grid.origin,
                                          f.sign);
        }
        return frame_state_discrete(spectrum_of(f), r.grid, r.grid.index_of(r.value),
                                    f.sign);
    case BasisKind::Energy: {
        ClockSpectrum c = g.clock ? *g.clock : clock_incommensurate(f.levels);
        c.values = f.levels;
        return time_state(c, r.grid, r.value);
    }
    case BasisKind::OscillatorLevel: {
        CVector v(static_cast<Eigen::Index>(f.dim()));
        for (std::size_t k = 0; k < f.dim(); ++k) {
            v[static_cast<Eigen::Index>(k)] =
                oscillator_position_wavefunction(k, f.mass, f.frequency, r.value);
        }
        return StateVector({f.dim()}, std::move(v));
    }
    default:
        return StateVector::basis({f.dim()}, static_cast<std::size_t>(std::lround(r.value)));
    }
}

StateVector dense_relative_state(const GlobalState &g,
                                 std::span<const Reading> readings) {
    double pref = 1.0;
    for (const auto &r : readings) {
        pref *= prefactor(g.factors[target_slot(g, r)], r);
    }
    return cplx(pref) * contract_dense(g, readings);
}

double bayes_conditional_dense(const GlobalState &g,
                               std::span<const Reading> given,
                               std::span<const Reading> outcome) {
    std::vector<Reading> all(given.begin(), given.end());
    double w = 1.0;
    for (const auto &r : outcome) {
        all.push_back(r);
        w *= weight(g.factors[target_slot(g, r)], r);
    }
    const double den = std::pow(contract_dense(g, given).norm(), 2);
    return w * std::pow(contract_dense(g, all).norm(), 2) / den;
}

namespace {

cplx propagator_amplitude(const GlobalState &g, const MeasurementFrames &f,
                          const MeasurementEvent &first,
                          const MeasurementEvent &second, bool project) {
    const auto rs = g.require(Role::Rod);
    const auto ss = g.require(Role::System);
    // Rod and system only: drop the clock from a copy.
    GlobalState q;
    q.factors = {g.factors[rs], g.factors[ss]};
    q.rod_dispersion = g.rod_dispersion;
    q.sys_dispersion = g.sys_dispersion;
    const auto shape = q.shape();
    const CMatrix h = rod_system_hamiltonian(q);
    CMatrix p = embed_sum(momentum_operators(q, 0), shape);
    const CMatrix pi0 = project ? eigenspace_projector(p, 0.0)
                                : CMatrix::Identity(p.rows(), p.cols());
    const double dt = f.clock.point(second.m) - f.clock.point(first.m);
    const CMatrix u = unitary(h, dt);
    auto ket = [&](const MeasurementEvent &e) {
        const std::array<Reading, 2> r{Reading::rod(f.rod, f.rod.point(e.j)),
                                       Reading::system(f.sys, f.sys.point(e.l))};
        return tensor(reading_ket(q, r[0]), reading_ket(q, r[1]));
    };
    const auto a = ket(first);
    const auto b = ket(second);
    return b.amplitudes().dot(u * pi0 * a.amplitudes());
}

} // namespace

double propagator_constrained(const GlobalState &g, const MeasurementFrames &f,
                              const MeasurementEvent &first,
                              const MeasurementEvent &second) {
    return std::norm(propagator_amplitude(g, f, first, second, true));
}

double propagator_full(const GlobalState &g, const MeasurementFrames &f,
                       const MeasurementEvent &first,
                       const MeasurementEvent &second) {
    return std::norm(propagator_amplitude(g, f, first, second, false));
}

double evolution_oracle_residual(const GlobalState &g, double t) {
    const auto cs = g.require(Role::Clock);
    const auto grid = continuous_grid(g.factors[cs]);
    const std::array<Reading, 1> r0{Reading::clock(grid, 0.0)};
    const std::array<Reading, 1> rt{Reading::clock(grid, t)};
    const auto phi0 = dense_relative_state(g, r0);
    const auto phit = dense_relative_state(g, rt);
    // Hamiltonian of the factors left after removing the clock.
    GlobalState q;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (i != cs) {
            q.factors.push_back(g.factors[i]);
        }
    }
    q.rod_dispersion = g.rod_dispersion;
    q.sys_dispersion = g.sys_dispersion;
    const CMatrix u = unitary(rod_system_hamiltonian(q), t);
    return (phit.amplitudes() - u * phi0.amplitudes()).norm();
}

} // namespace relspace
