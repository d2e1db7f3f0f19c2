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
 * Reference computations on the dense tensor: frame kets built from the
 * frames module, partial contraction, and unitary propagators. Used to
 * cross-check the sparse pipelines.
 */

#pragma once

#include <span>

#include "relspace/measurements.hpp"
#include "relspace/relational.hpp"

namespace relspace {

/// Ket of a reading in the space of the factor it targets.
StateVector reading_ket(const GlobalState &g, const Reading &r);

/// Contraction of the dense universe with the readings, with the sqrt(d)
/// prefactor of every discrete clock or rod reading.
StateVector dense_relative_state(const GlobalState &g,
                                 std::span<const Reading> readings);

/// Ratio of POVM expectations evaluated on the dense tensor.
double bayes_conditional_dense(const GlobalState &g,
                               std::span<const Reading> given,
                               std::span<const Reading> outcome);

/// |<x'', y''| e^{-i(H_R + H_S) dt} Pi_0 |x', y'>|^2 with Pi_0 the kernel
/// projector of the total momentum, all matrices dense.
double propagator_constrained(const GlobalState &g, const MeasurementFrames &f,
                              const MeasurementEvent &first,
                              const MeasurementEvent &second);

/// Same amplitude without the kernel projector.
double propagator_full(const GlobalState &g, const MeasurementFrames &f,
                       const MeasurementEvent &first,
                       const MeasurementEvent &second);

/// ||phi(t) - e^{-i(H_R + H_S) t} phi(0)|| with the relative states from
/// dense contraction with continuous clock readings and the propagator from
/// a dense eigendecomposition.
double evolution_oracle_residual(const GlobalState &g, double t);

} // namespace relspace
