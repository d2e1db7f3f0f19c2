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
// Command-line front end: run, verify and sweep.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "relspace/scenario.hpp"
#include "relspace/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kInvariantFailure = 3;

int config_failure(const std::string &file, const relspace::ConfigError &e) {
    std::string where = file;
    if (e.line() > 0) {
        where += ":" + std::to_string(e.line());
    }
    if (!e.key().empty()) {
        where += ": key '" + e.key() + "'";
    }
    std::fprintf(stderr, "config error: %s: %s\n", where.c_str(), e.what());
    return kConfigError;
}

int summarize(const relspace::RunReport &rep) {
    for (const auto &a : rep.analyses) {
        std::printf("%-22s %-6s %-5s residual=%s tolerance=%s time=%.1fms%s%s\n",
                    a.op.c_str(), a.anchor.c_str(), a.status.c_str(),
                    relspace::format_double(a.residual).c_str(),
                    relspace::format_double(a.tolerance).c_str(), a.wall_ms,
                    a.message.empty() ? "" : " ", a.message.c_str());
    }
    std::printf("artifacts in %s\n", rep.directory.string().c_str());
    return rep.passed() ? kOk : kInvariantFailure;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"relspace: emergent time and space from constrained universes"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Only print errors");

    std::string run_file;
    auto *run = app.add_subcommand("run", "Run the analyses of a scenario file");
    run->add_option("file", run_file, "Scenario file")->required();

    std::string filter;
    bool fault = false;
    auto *ver = app.add_subcommand("verify", "Run the property suites");
    ver->add_option("--filter", filter, "Module to run");
    ver->add_flag("--inject-phase-fault", fault)->group("");

    std::string sweep_file;
    std::string param;
    std::vector<double> values;
    auto *sweep = app.add_subcommand("sweep", "Vary one parameter of a scenario");
    sweep->add_option("file", sweep_file, "Scenario file")->required();
    sweep->add_option("--param", param, "Sweepable key")->required();
    sweep->add_option("--values", values, "Comma-separated values")
        ->delimiter(',')
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }
    spdlog::set_level(quiet ? spdlog::level::err : spdlog::level::warn);

    try {
        if (*run) {
            try {
                return summarize(relspace::run_scenario(relspace::load_scenario(run_file)));
            } catch (const relspace::ConfigError &e) {
                return config_failure(run_file, e);
            }
        }
        if (*sweep) {
            try {
                return summarize(relspace::sweep_scenario(relspace::load_scenario(sweep_file),
                                                          param, values));
            } catch (const relspace::ConfigError &e) {
                return config_failure(sweep_file, e);
            }
        }
        relspace::VerifyOptions opts;
        opts.filter = filter;
        opts.inject_phase_fault = fault;
        relspace::VerifyReport rep;
        try {
            rep = relspace::verify(opts);
        } catch (const std::invalid_argument &e) {
            std::fprintf(stderr, "verify: %s\n", e.what());
            return kConfigError;
        }
        for (const auto &c : rep.checks) {
            std::printf("%-4s %-13s %-28s %-6s residual=%s tolerance=%s%s%s\n",
                        c.passed ? "ok" : "FAIL", c.module.c_str(), c.name.c_str(),
                        c.anchor.c_str(), relspace::format_double(c.residual).c_str(),
                        relspace::format_double(c.tolerance).c_str(),
                        c.detail.empty() ? "" : " ", c.detail.c_str());
        }
        if (!rep.passed()) {
            std::printf("failed invariants:\n");
            for (const auto &f : rep.failures()) {
                std::printf("  %s\n", f.c_str());
            }
            return kInvariantFailure;
        }
        std::printf("all %zu checks passed\n", rep.checks.size());
        return kOk;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInvariantFailure;
    }
}
