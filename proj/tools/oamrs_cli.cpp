// SPDX-License-Identifier: Apache-2.0
//
// oamrs: link-level simulator for rate-splitting OAM-MIMO downlinks
// Copyright (C) 2026 The oamrs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end: run, sweep, case, trace.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oamrs/errors.hpp"
#include "oamrs/sim_harness.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_numerical = 2;

std::string fmt9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string join_modes(const std::vector<int> &modes)
{
    std::string s;
    for (int m : modes)
        s += (s.empty() ? "" : ",") + std::to_string(m);
    return s;
}

std::string join_values(const std::vector<double> &values)
{
    std::string s;
    for (double v : values)
        s += (s.empty() ? "" : ",") + fmt9(v);
    return s;
}

void write_output(const std::string &text, const std::string &out)
{
    if (out.empty())
    {
        std::cout << text;
        return;
    }
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    file << text;
    file.close();
    if (!file)
        throw std::runtime_error("cannot write " + out);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Link-level simulator for rate-splitting OAM-MIMO downlinks"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::vector<std::string> schemes;
    int case_id = 0;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--seed", seed, "initialization seed (overrides fp.init_seed)");
        sub->add_option("--out", out_path, "output file (default: standard output)");
    };

    CLI::App *run = app.add_subcommand("run", "optimize the configured scenario and print the report");
    add_common(run);
    run->add_option("--scheme", schemes, "schemes to evaluate: rs, sdma, noma, tdma")->delimiter(',');

    CLI::App *sweep = app.add_subcommand("sweep", "run the configured sweep and write CSV");
    add_common(sweep);
    sweep->add_option("--scheme", schemes, "schemes to evaluate: rs, sdma, noma, tdma")->delimiter(',');

    CLI::App *show_case = app.add_subcommand("case", "print a preset mode case");
    show_case->add_option("--id", case_id, "preset id 1..4")->required();

    CLI::App *trace = app.add_subcommand("trace", "per-iteration RS convergence as CSV");
    add_common(trace);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (show_case->parsed())
        {
            const oamrs::ModeCase c = oamrs::preset_case(case_id);
            std::cout << "case: " << c.name << '\n'
                      << "modes: " << join_modes(c.modes) << '\n'
                      << "rx_count: " << c.rx_count << '\n'
                      << "tx_count: " << c.tx_count << '\n'
                      << "tau_sq: " << join_values(c.tau_sq) << '\n';
            return exit_ok;
        }

        oamrs::HarnessConfig cfg;
        if (!config_path.empty())
            cfg = oamrs::load_scenario(config_path);
        else
            cfg = oamrs::parse_config("");
        if (seed)
            cfg.fp.init_seed = *seed;
        if (!schemes.empty())
        {
            cfg.sweep.schemes.clear();
            for (const std::string &s : schemes)
                cfg.sweep.schemes.push_back(oamrs::parse_scheme(s));
        }

        const oamrs::ScenarioConfig scenario = oamrs::scenario_for_id(cfg.scenario, cfg.sweep.case_id);
        const oamrs::ModeCase mode_case = oamrs::resolve_case(scenario, cfg.sweep.case_id);

        if (sweep->parsed())
        {
            const auto rows = oamrs::run_sweep(cfg.scenario, cfg.sweep, cfg.fp);
            if (out_path.empty())
                std::cout << oamrs::format_csv(rows);
            else
                oamrs::emit_csv(rows, out_path);
            return exit_ok;
        }

        if (trace->parsed())
        {
            write_output(oamrs::trace_csv(scenario, mode_case, cfg.fp), out_path);
            return exit_ok;
        }

        std::ostringstream report;
        for (oamrs::Scheme s : cfg.sweep.schemes)
        {
            const oamrs::SchemeRun r = oamrs::run_scheme(scenario, mode_case, s, cfg.fp, cfg.sweep);
            report << "scheme: " << oamrs::to_string(s) << '\n'
                   << "case: " << oamrs::case_label(cfg.sweep.case_id) << '\n'
                   << "pairs: " << scenario.pairs.size() << '\n'
                   << "sum_capacity_bps_hz: " << fmt9(r.report.sum) << '\n'
                   << "cap_user_a: " << fmt9(r.report.total_a) << '\n'
                   << "cap_user_b: " << fmt9(r.report.total_b) << '\n'
                   << "private_a: " << fmt9(r.report.private_a) << '\n'
                   << "private_b: " << fmt9(r.report.private_b) << '\n'
                   << "common_a: " << fmt9(r.report.common_a) << '\n'
                   << "common_b: " << fmt9(r.report.common_b) << '\n'
                   << "common_pair: " << fmt9(r.report.common_pair) << '\n'
                   << "converged: " << (r.converged ? "true" : "false") << '\n'
                   << "iterations: " << r.iterations << '\n'
                   << "seed: " << cfg.fp.init_seed << '\n';
        }
        write_output(report.str(), out_path);
        return exit_ok;
    }
    catch (const oamrs::NumericalError &e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
}
