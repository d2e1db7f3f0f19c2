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
 * Universe of two harmonic oscillators with a continuous momentum
 * constraint, represented in the truncated energy basis.
 */

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "relspace/universe.hpp"

namespace relspace {

/// Normalized Hermite functions h_0..h_n at @p u by the stable three-term
/// recurrence.
std::vector<double> hermite_functions(std::size_t n, double u);

/// Momentum-space eigenfunction (-i)^k h_k(p/s)/sqrt(s), s = sqrt(M w).
cplx oscillator_momentum_wavefunction(std::size_t k, double mass, double omega,
                                      double p);
/// Position-space eigenfunction sqrt(s) h_k(s x), s = sqrt(M w).
double oscillator_position_wavefunction(std::size_t k, double mass,
                                        double omega, double x);

/// Truncations to @p levels of the ladder-operator matrices built in a
/// space one level larger.
CMatrix oscillator_hamiltonian(std::size_t levels, double mass, double omega);
CMatrix oscillator_momentum_operator(std::size_t levels, double mass,
                                     double omega);
CMatrix oscillator_position_operator(std::size_t levels, double mass,
                                     double omega);

struct QuadratureSpec {
    std::size_t points = 257;
    /// Half-width of the momentum window in standard deviations of |psi|^2.
    double half_width = 8.0;
};

struct MomentumAmplitude {
    std::function<cplx(double)> psi;
    double center = 0.0;
    double spread = 1.0;  ///< standard deviation of |psi|^2

    static MomentumAmplitude gaussian(double center, double spread);
};

struct OscillatorParams {
    double M = 1.0;
    double m = 1.0;
    double omega_R = 1.0;
    double omega_S = 1.0;
    /// One weight per distinct clock level (ascending); empty for uniform.
    std::vector<cplx> clock_coeffs;
    MomentumAmplitude psi = MomentumAmplitude::gaussian(0.0, 1.0);
    QuadratureSpec quad;
    std::size_t trunc = 12;  ///< levels kept per oscillator
};

struct OscillatorUniverse {
    GlobalState state;
    OscillatorParams params;
    CMatrix overlap;       ///< a_kl = int psi(p) <E_k|-p>_R <E_l|p>_S dp
    CMatrix coefficients;  ///< normalized amplitudes of |k>_R|l>_S
    std::vector<double> grid;
    double window_leakage = 0.0;    ///< mass of |psi|^2 outside the window
    double quadrature_delta = 0.0;  ///< max |a_kl| change on a refined grid
    double raw_norm = 0.0;          ///< sum |c a|^2 before normalization
    /// ||(P_R + P_S)|Psi>|| of the momentum-constrained state on the grid.
    double momentum_residual_precursor = 0.0;
    /// Same for the energy-constrained state; nonzero in general.
    double momentum_residual_final = 0.0;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string &what, double leakage)
        : std::runtime_error(what), leakage_(leakage) {}
    [[nodiscard]] double leakage() const { return leakage_; }

  private:
    double leakage_;
};

OscillatorUniverse oscillator_universe(const OscillatorParams &params);

/// <t|<p_R|<p_S|Psi> re-expanded in the momentum basis.
cplx oscillator_momentum_amplitude(const OscillatorUniverse &u, double t,
                                   double p_rod, double p_sys);

} // namespace relspace
