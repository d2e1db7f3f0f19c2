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
 * Single- and two-time measurement statistics: averaging over the
 * external time, and memory ancillas correlated at given clock readings.
 */

#pragma once

#include <optional>
#include <vector>

#include "relspace/universe.hpp"

namespace relspace {

/// Grid indices of a (clock, rod, system) reading triple.
struct MeasurementEvent {
    int m = 0;
    int j = 0;
    int l = 0;
};

struct MeasurementFrames {
    FrameGrid clock;
    FrameGrid rod;
    FrameGrid sys;
    bool orthogonal = false;
};

/// D = d on every factor; the clock must be a complete equally spaced
/// ladder. Throws std::invalid_argument otherwise.
MeasurementFrames orthogonal_frames(const GlobalState &g);

/// Overcomplete reading grids (D >= d) for the external-time protocol.
MeasurementFrames povm_frames(const GlobalState &g, int D_clock, int D_rod,
                              int D_sys);

struct GpptSingle {
    double closed_form = 0.0;             ///< joint over rod and system
    std::optional<double> theta_average;  ///< trace averaged over one period
    double conditioned = 0.0;             ///< divided by the rod marginal
    bool commensurate = true;
    std::size_t theta_samples = 0;
};

GpptSingle gppt_single(const GlobalState &g, const MeasurementFrames &f,
                       const MeasurementEvent &e);

struct TwoTime {
    double joint = 0.0;        ///< with the 1/(d_R^2 d_S^2) prefactor
    double conditioned = 0.0;  ///< joint times d_R^2
};

/// Throws std::invalid_argument when the second event precedes the first.
TwoTime gppt_two_time(const GlobalState &g, const MeasurementFrames &f,
                      const MeasurementEvent &first,
                      const MeasurementEvent &second);

struct MemoryLayout {
    /// Measurement times, strictly increasing, on the clock grid.
    std::vector<double> times;
};

/// History state with one rod and one system memory per record. Each
/// memory has d + 1 levels, the last being the ready symbol.
GlobalState glm_build(const GlobalState &g, const MeasurementFrames &f,
                      const MemoryLayout &layout);

/// Number of records in a history state.
int glm_records(const GlobalState &h);

struct GlmSingle {
    double joint = 0.0;
    double conditioned = 0.0;
};

/// Outcome (j, l) registered by the single record, read at clock time t.
GlmSingle glm_single_prob(const GlobalState &h, const MeasurementFrames &f,
                          double t, int j, int l);

struct GlmTwoTime {
    double history_ratio = 0.0;  ///< P(second, first) / P(first)
    double conditioned = 0.0;    ///< additionally conditioned on the rod
    double joint = 0.0;          ///< conditioned / d_R^2
};

/// The clock indices of the events must match the two records; the
/// memories are read at the second one.
GlmTwoTime glm_two_time_prob(const GlobalState &h, const MeasurementFrames &f,
                             const MeasurementEvent &first,
                             const MeasurementEvent &second);

/// Distribution of the (rod, system) memory symbols of @p record at clock
/// time @p t, row-major over (d_R + 1) x (d_S + 1) with the ready symbol
/// last.
std::vector<double> memory_marginal(const GlobalState &h,
                                    const MeasurementFrames &f, double t,
                                    int record);

} // namespace relspace
