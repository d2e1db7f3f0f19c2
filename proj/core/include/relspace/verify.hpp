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
 * Desk-scale property suites for every module, run by `relspace verify`.
 */

#pragma once

#include <string>
#include <vector>

namespace relspace {

struct Check {
    std::string module;
    std::string name;
    std::string anchor;  ///< equation tag of the property
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    /// Module name to run; empty runs every suite.
    std::string filter;
    /// Flips the rod phase sign inside the sparse contraction for the
    /// duration of the run (mutation smoke test).
    bool inject_phase_fault = false;
    unsigned long long seed = 20260101;
};

struct VerifyReport {
    std::vector<Check> checks;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::vector<std::string> failures() const;
};

/// Module names accepted by the filter.
const std::vector<std::string> &verify_modules();

/// Throws std::invalid_argument for an unknown filter.
VerifyReport verify(const VerifyOptions &opts = {});

} // namespace relspace
