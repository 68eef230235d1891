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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oamrs/baseline_schemes.hpp"
#include "oamrs/fp_precoder.hpp"
#include "oamrs/link_metrics.hpp"
#include "oamrs/rs_signal.hpp"

namespace oamrs {

enum class SweepVariable
{
    distance,
    power,
};

enum class Spacing
{
    linear,
    log,
};

enum class Scheme
{
    rs,
    sdma,
    noma,
    tdma,
};

const char *to_string(SweepVariable v);
const char *to_string(Scheme s);
Scheme parse_scheme(const std::string &name);

struct SweepSpec
{
    SweepVariable variable = SweepVariable::distance;
    double start = 5.0; // meters or watts
    double stop = 50.0;
    std::size_t points = 10;
    Spacing spacing = Spacing::linear;
    std::vector<Scheme> schemes{Scheme::rs};
    int case_id = 3; // 1..4 for the presets, 0 for the scenario as configured
    TdmaFractions tdma;
    std::optional<Receiver> noma_strong;

    void validate() const;
    std::vector<double> values() const;
};

struct ResultRow
{
    std::string sweep_var;
    double sweep_value = 0.0;
    std::string scheme;
    std::string case_label;
    double sum_capacity = 0.0;
    double cap_user_a = 0.0;
    double cap_user_b = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
};

struct HarnessConfig
{
    ScenarioConfig scenario;
    SweepSpec sweep;
    FpConfig fp;
};

// Mode-combination presets 1..4.
ModeCase preset_case(int id);

/// Single pair, M = 3, N = 4, beta = 4 pi, lambda = 0.01 m, d = 10 m, aligned
/// arrays, sigma^2 = 1e-9 W, P_T = 1 W, tau^2 = {4, 4, 4}.
ScenarioConfig default_scenario();

/// One pair per mode of `mode_case`, geometry and propagation taken from `base`.
///
/// Pair k uses mode modes[k-1], a transmit UCA of radius k lambda and
/// receivers of radii (2k-1) lambda and 2k lambda; array sizes and tau^2 come
/// from the case.
ScenarioConfig scenario_for_case(const ScenarioConfig &base, const ModeCase &mode_case);

// The case a harness run uses: preset `case_id`, or one described by the scenario itself when 0.
ModeCase resolve_case(const ScenarioConfig &scenario, int case_id);

// The scenario a harness run uses for `case_id`.
ScenarioConfig scenario_for_id(const ScenarioConfig &base, int case_id);

std::string case_label(int case_id);

// Parses a JSON document with optional top-level objects "scenario", "sweep" and "fp".
HarnessConfig parse_config(const std::string &text);
HarnessConfig load_scenario(const std::filesystem::path &path);

// Sum over all pairs of the scenario.
SchemeRun run_scheme(const ScenarioConfig &scenario, const ModeCase &mode_case, Scheme scheme, const FpConfig &fp,
                     const SweepSpec &options = {});

// Applies one sweep value (distance to every link, or the power budget).
ScenarioConfig apply_sweep_value(const ScenarioConfig &scenario, SweepVariable variable, double value);

/// One row per (sweep point, scheme), ordered by point then scheme.
///
/// Points run concurrently on up to `threads` workers (0 means hardware
/// concurrency). A point whose optimization fails numerically yields zero
/// capacities with converged = false.
std::vector<ResultRow> run_sweep(const ScenarioConfig &scenario, const SweepSpec &sweep, const FpConfig &fp,
                                 std::size_t threads = 0);

std::string format_csv(const std::vector<ResultRow> &rows);
void emit_csv(const std::vector<ResultRow> &rows, const std::filesystem::path &path);
std::vector<ResultRow> parse_csv(const std::string &text);

// Per-iteration record of every pair's RS optimization, as CSV.
std::string trace_csv(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &fp);

} // namespace oamrs
