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
 * Scenario files: a universe declaration plus a list of analyses, run into
 * CSV/JSON artifacts and a versioned report.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace relspace {

inline constexpr int kReportSchemaVersion = 1;

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &msg, int line = 0, std::string key = {})
        : std::runtime_error(msg), line_(line), key_(std::move(key)) {}
    /// 1-based line of the offending node, 0 when unknown.
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] const std::string &key() const { return key_; }

  private:
    int line_;
    std::string key_;
};

struct UniverseBlock {
    std::string constructor = "line";  ///< line | kg | dirac
    int d_rod = 3;
    int d_sys = 3;
    double L = 6.283185307179586;
    double M = 2.0;
    double m = 1.0;
    int sys_offset = 0;
    std::vector<std::complex<double>> coeffs;
    bool random_coeffs = false;
    bool real_coeffs = false;
    std::size_t clock_ladder = 0;
    std::string branch = "positive";
    std::optional<double> frame_mass;
};

struct AnalysisBlock {
    std::string op;
    std::string output;
    std::map<std::string, double> params;
    int line = 0;
};

struct OutputBlock {
    std::string directory = "relspace-out";
    bool csv = true;
    bool json = true;
    /// Significant digits; 0 selects the shortest round-trip form.
    int precision = 0;
    bool timings = false;
};

struct ScenarioConfig {
    int schema = 1;
    std::uint64_t seed = 0;
    UniverseBlock universe;
    std::vector<AnalysisBlock> analyses;
    OutputBlock output;
    std::uint64_t hash = 0;
};

/// Parses and validates; throws ConfigError with the line of the offending
/// key.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path &path);

/// Equation tag recorded for an analysis operation.
std::string_view analysis_anchor(std::string_view op);

/// Keys that `sweep` may vary.
const std::vector<std::string> &sweepable_keys();

/// Shortest decimal that parses back to the same double.
std::string format_double(double x, int precision = 0);

std::uint64_t fnv1a64(std::string_view bytes);

struct AnalysisResult {
    std::string op;
    std::string anchor;
    std::string status;     ///< pass | fail | skip
    std::string invariant;  ///< property checked by the analysis
    double residual = 0.0;
    double tolerance = 0.0;
    double wall_ms = 0.0;
    std::vector<std::string> artifacts;
    std::string message;
};

struct RunReport {
    std::uint64_t config_hash = 0;
    std::vector<AnalysisResult> analyses;
    std::filesystem::path directory;

    [[nodiscard]] bool passed() const;
};

/// Output directory: RELSPACE_OUTPUT_DIR when set, else the config value.
std::filesystem::path output_directory(const ScenarioConfig &cfg);

RunReport run_scenario(const ScenarioConfig &cfg);

/// Runs every analysis that declares @p param once per value and writes
/// one table per analysis with the log-log slope appended.
RunReport sweep_scenario(const ScenarioConfig &cfg, const std::string &param,
                         const std::vector<double> &values);

std::string report_json(const RunReport &rep, const ScenarioConfig &cfg);

} // namespace relspace
