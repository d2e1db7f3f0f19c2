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
#include <doctest.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "relspace/scenario.hpp"

using namespace relspace;
namespace fs = std::filesystem;

namespace {

int error_line(std::string_view text) {
    try {
        (void)parse_scenario(text);
    } catch (const ConfigError &e) {
        return e.line();
    }
    return -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

constexpr std::string_view kGood = R"(schema: 1
seed: 3
universe:
  constructor: line
  d_rod: 3
  d_sys: 3
  sys_offset: -1
  coeffs: [0.6, 0.48, 0.64]
analyses:
  - op: distribution
    output: dist
    D_rod: 3
    D_sys: 8
    j: 1
)";

} // namespace

TEST_CASE("valid configs parse with defaults filled in") {
    const auto cfg = parse_scenario(kGood);
    CHECK(cfg.seed == 3);
    CHECK(cfg.universe.coeffs.size() == 3);
    REQUIRE(cfg.analyses.size() == 1);
    CHECK(cfg.analyses[0].params.at("D_sys") == 8.0);
    CHECK(cfg.output.precision == 0);
    CHECK(cfg.hash == parse_scenario(kGood).hash);
    CHECK(cfg.hash != parse_scenario(std::string(kGood) + "output:\n  precision: 6\n").hash);
}

TEST_CASE("config errors carry line and key") {
    CHECK(error_line("schema: 1\nuniverse:\n  constructor: line\n  bogus: 1\n") == 4);
    CHECK(error_line("schema: 1\nuniverse:\n  M: -2\n") == 3);
    CHECK(error_line("schema: 1\nuniverse:\n  constructor: warp\n") == 3);
    CHECK(error_line("schema: 1\nuniverse:\n  constructor: kg\nanalyses:\n  - op: closed_form_grid\n") == 5);
    CHECK(error_line("schema: 1\nuniverse: {}\nanalyses:\n  - op: nope\n") == 4);
    CHECK(error_line("schema: [\n") > 0);
    try {
        (void)parse_scenario("schema: 1\nuniverse:\n  d_rod: 2.5\n");
        FAIL("expected a config error");
    } catch (const ConfigError &e) {
        CHECK(e.key() == "d_rod");
    }
}

TEST_CASE("duplicate output stems are rejected") {
    const std::string twice = std::string(kGood) + "  - op: distribution\n    output: dist\n";
    CHECK(error_line(twice) > 0);
}

TEST_CASE("shortest round-trip formatting") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng) * std::pow(10.0, i % 21 - 10);
        const auto s = format_double(x);
        double y = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), y);
        CHECK(x == y);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0, 4) == "0.3333");
}

TEST_CASE("FNV-1a reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("every analysis names its anchor") {
    for (auto op : {"closed_form_grid", "distribution", "density", "speed_limit", "uncertainty",
                    "two_time", "heavy_reference", "kg_residual", "dirac_residual"}) {
        CHECK_FALSE(analysis_anchor(op).empty());
        CHECK(analysis_anchor(op).substr(0, 2) == "Eq");
    }
}

TEST_CASE("runs write checksummed artifacts and a versioned report") {
    ::unsetenv("RELSPACE_OUTPUT_DIR");
    auto cfg = parse_scenario(kGood);
    const fs::path dir = fs::temp_directory_path() / "relspace-unit-run";
    fs::remove_all(dir);
    cfg.output.directory = dir.string();
    const auto rep = run_scenario(cfg);
    CHECK(rep.passed());
    const auto csv = slurp(dir / "dist.csv");
    CHECK(csv.rfind("y,probability\n", 0) == 0);
    CHECK(csv.find("#total,1") != std::string::npos);
    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report.at("schema_version") == kReportSchemaVersion);
    CHECK(report.at("analyses").at(0).at("anchor") == "Eq16");
    CHECK(report.at("config_hash").get<std::string>().size() == 16);
    CHECK_FALSE(report.at("analyses").at(0).contains("wall_time_ms"));

    const auto again = slurp(dir / "dist.csv");
    run_scenario(cfg);
    CHECK(slurp(dir / "dist.csv") == again);

    ::setenv("RELSPACE_OUTPUT_DIR", (dir / "env").c_str(), 1);
    CHECK(output_directory(cfg) == dir / "env");
    ::unsetenv("RELSPACE_OUTPUT_DIR");
    fs::remove_all(dir);
}

TEST_CASE("sweeps validate their key and range") {
    const auto cfg = parse_scenario(kGood);
    CHECK_THROWS(sweep_scenario(cfg, "d_rod", {1.0, 2.0}));
    CHECK_THROWS(sweep_scenario(cfg, "h", {}));
    CHECK(std::find(sweepable_keys().begin(), sweepable_keys().end(), "mass_ratio") !=
          sweepable_keys().end());
}
