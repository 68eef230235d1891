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

#include "oamrs/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "oamrs/errors.hpp"

namespace oamrs {

namespace {

using json = nlohmann::json;

constexpr const char *csv_header = "sweep_var,sweep_value,scheme,case,sum_capacity_bps_hz,cap_user_a,cap_user_b,"
                                   "converged,iterations,seed";

std::string fmt9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void check_keys(const json &obj, const std::string &section, const std::set<std::string> &allowed)
{
    if (!obj.is_object())
        throw ConfigError(section + " must be an object");
    for (const auto &item : obj.items())
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown key '" + (section.empty() ? "" : section + ".") + item.key() + "'");
}

std::string path_of(const std::string &section, const std::string &key)
{
    return section + "." + key;
}

void read_number(const json &obj, const std::string &section, const std::string &key, double &out)
{
    if (!obj.contains(key))
        return;
    const json &v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(path_of(section, key) + " must be a number");
    out = v.get<double>();
}

template <typename Int>
void read_integer(const json &obj, const std::string &section, const std::string &key, Int &out)
{
    if (!obj.contains(key))
        return;
    const json &v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(path_of(section, key) + " must be an integer");
    if constexpr (std::is_unsigned_v<Int>)
    {
        if (v.is_number_unsigned())
            out = v.get<Int>();
        else if (v.get<std::int64_t>() < 0)
            throw ConfigError(path_of(section, key) + " must be nonnegative");
        else
            out = static_cast<Int>(v.get<std::int64_t>());
    }
    else
        out = v.get<Int>();
}

bool read_string(const json &obj, const std::string &section, const std::string &key, std::string &out)
{
    if (!obj.contains(key))
        return false;
    const json &v = obj.at(key);
    if (!v.is_string())
        throw ConfigError(path_of(section, key) + " must be a string");
    out = v.get<std::string>();
    return true;
}

void read_numbers(const json &obj, const std::string &section, const std::string &key, std::vector<double> &out)
{
    if (!obj.contains(key))
        return;
    const json &v = obj.at(key);
    if (!v.is_array())
        throw ConfigError(path_of(section, key) + " must be an array of numbers");
    out.clear();
    for (const json &e : v)
    {
        if (!e.is_number())
            throw ConfigError(path_of(section, key) + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
}

template <typename Enum>
void read_enum(const json &obj, const std::string &section, const std::string &key,
               const std::vector<std::pair<std::string, Enum>> &names, Enum &out)
{
    std::string s;
    if (!read_string(obj, section, key, s))
        return;
    for (const auto &[name, value] : names)
        if (name == s)
        {
            out = value;
            return;
        }
    std::string options;
    for (const auto &[name, value] : names)
        options += (options.empty() ? "" : ", ") + name;
    throw ConfigError(path_of(section, key) + ": '" + s + "' is not one of " + options);
}

ScenarioConfig parse_scenario(const json &obj)
{
    const std::string section = "scenario";
    check_keys(obj, section,
               {"tx_count", "rx_count", "oam_mode", "distance", "polar_offset", "azimuth_offset", "noise_power",
                "power_budget", "wavelength", "antenna_factor", "zeta_convention", "tau_source", "tau_sq",
                "exclusion"});

    ScenarioConfig s = default_scenario();
    PairConfig &pair = s.pairs.front();
    std::size_t tx = pair.tx.element_count;
    std::size_t rx = pair.rx_a.element_count;
    LinkGeometry geom = pair.geom_a;

    read_integer(obj, section, "tx_count", tx);
    read_integer(obj, section, "rx_count", rx);
    read_integer(obj, section, "oam_mode", pair.oam_mode);
    read_number(obj, section, "distance", geom.distance);
    read_number(obj, section, "polar_offset", geom.polar_offset);
    read_number(obj, section, "azimuth_offset", geom.azimuth_offset);
    read_number(obj, section, "noise_power", s.noise_power);
    read_number(obj, section, "power_budget", s.power_budget);
    read_number(obj, section, "wavelength", s.propagation.wavelength);
    read_number(obj, section, "antenna_factor", s.propagation.antenna_factor);
    read_enum<ZetaConvention>(obj, section, "zeta_convention",
                              {{"geometry_consistent", ZetaConvention::geometry_consistent},
                               {"geometry_mirrored", ZetaConvention::geometry_mirrored},
                               {"asin_branch", ZetaConvention::asin_branch}},
                              s.propagation.zeta_convention);
    read_enum<TauSource>(obj, section, "tau_source",
                         {{"table_preset", TauSource::table_preset}, {"computed_from_gram", TauSource::computed_from_gram}},
                         s.tau_source);
    read_numbers(obj, section, "tau_sq", s.tau_sq);
    read_enum<InterferenceExclusion>(
        obj, section, "exclusion",
        {{"row_and_column", InterferenceExclusion::row_and_column}, {"entry_only", InterferenceExclusion::entry_only}},
        s.exclusion);

    if (tx < 1 || rx < 1)
        throw ConfigError("scenario.tx_count and scenario.rx_count must be at least 1");
    if (!(s.propagation.wavelength > 0.0))
        throw ConfigError("scenario.wavelength must be positive");
    const double lambda = s.propagation.wavelength;
    pair.tx = UcaSpec::uniform(tx, lambda);
    pair.rx_a = UcaSpec::uniform(rx, lambda);
    pair.rx_b = UcaSpec::uniform(rx, 2.0 * lambda);
    pair.geom_a = geom;
    pair.geom_b = geom;
    return s;
}

SweepSpec parse_sweep(const json &obj)
{
    const std::string section = "sweep";
    check_keys(obj, section,
               {"variable", "start", "stop", "points", "spacing", "schemes", "case_id", "tdma_fractions",
                "noma_strong"});
    SweepSpec s;
    read_enum<SweepVariable>(obj, section, "variable",
                             {{"distance", SweepVariable::distance}, {"power", SweepVariable::power}}, s.variable);
    read_number(obj, section, "start", s.start);
    read_number(obj, section, "stop", s.stop);
    read_integer(obj, section, "points", s.points);
    read_enum<Spacing>(obj, section, "spacing", {{"linear", Spacing::linear}, {"log", Spacing::log}}, s.spacing);
    if (obj.contains("schemes"))
    {
        const json &v = obj.at("schemes");
        if (!v.is_array())
            throw ConfigError("sweep.schemes must be an array of strings");
        s.schemes.clear();
        for (const json &e : v)
        {
            if (!e.is_string())
                throw ConfigError("sweep.schemes must be an array of strings");
            try
            {
                s.schemes.push_back(parse_scheme(e.get<std::string>()));
            }
            catch (const DomainError &err)
            {
                throw ConfigError(std::string("sweep.schemes: ") + err.what());
            }
        }
    }
    read_integer(obj, section, "case_id", s.case_id);
    std::vector<double> fractions{s.tdma.a, s.tdma.b};
    read_numbers(obj, section, "tdma_fractions", fractions);
    if (fractions.size() != 2)
        throw ConfigError("sweep.tdma_fractions must hold two numbers");
    s.tdma = {fractions[0], fractions[1]};
    std::string strong = "auto";
    read_string(obj, section, "noma_strong", strong);
    if (strong == "a")
        s.noma_strong = Receiver::a;
    else if (strong == "b")
        s.noma_strong = Receiver::b;
    else if (strong != "auto")
        throw ConfigError("sweep.noma_strong must be \"a\", \"b\" or \"auto\"");
    return s;
}

FpConfig parse_fp(const json &obj)
{
    const std::string section = "fp";
    check_keys(obj, section,
               {"convergence_threshold", "max_outer_iterations", "inner_step_count", "inner_step_size", "init_seed",
                "init_scale"});
    FpConfig c;
    read_number(obj, section, "convergence_threshold", c.convergence_threshold);
    read_integer(obj, section, "max_outer_iterations", c.max_outer_iterations);
    read_integer(obj, section, "inner_step_count", c.inner_step_count);
    read_number(obj, section, "inner_step_size", c.inner_step_size);
    read_integer(obj, section, "init_seed", c.init_seed);
    read_number(obj, section, "init_scale", c.init_scale);
    return c;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string &text, std::size_t byte)
{
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            column = 1;
        }
        else
            ++column;
    }
    return {line, column};
}

void add_report(RateReport &total, const RateReport &r)
{
    total.private_a += r.private_a;
    total.private_b += r.private_b;
    total.common_a += r.common_a;
    total.common_b += r.common_b;
    total.common_pair += r.common_pair;
    total.split_a += r.split_a;
    total.split_b += r.split_b;
    total.sum += r.sum;
    total.total_a += r.total_a;
    total.total_b += r.total_b;
}

std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep))
        fields.push_back(field);
    if (!line.empty() && line.back() == sep)
        fields.emplace_back();
    return fields;
}

} // namespace

const char *to_string(SweepVariable v)
{
    return v == SweepVariable::distance ? "distance" : "power";
}

const char *to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::rs:
        return "rs";
    case Scheme::sdma:
        return "sdma";
    case Scheme::noma:
        return "noma";
    case Scheme::tdma:
        break;
    }
    return "tdma";
}

Scheme parse_scheme(const std::string &name)
{
    for (Scheme s : {Scheme::rs, Scheme::sdma, Scheme::noma, Scheme::tdma})
        if (name == to_string(s))
            return s;
    throw DomainError("unknown scheme '" + name + "' (expected rs, sdma, noma or tdma)");
}

void SweepSpec::validate() const
{
    if (!(start < stop))
        throw DomainError("sweep start must be below stop");
    if (!(start > 0.0) || !std::isfinite(stop))
        throw DomainError("sweep range must be positive and finite");
    if (points < 2)
        throw DomainError("sweep points must be at least 2");
    if (schemes.empty())
        throw DomainError("sweep schemes must not be empty");
    if (case_id < 0 || case_id > 4)
        throw DomainError("case_id must be 1..4, or 0 for the configured scenario");
    tdma.validate();
}

std::vector<double> SweepSpec::values() const
{
    validate();
    std::vector<double> v(points);
    const double last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
    {
        const double t = static_cast<double>(i) / last;
        v[i] = spacing == Spacing::linear ? start + t * (stop - start) : start * std::pow(stop / start, t);
    }
    v.back() = stop;
    return v;
}

ModeCase preset_case(int id)
{
    switch (id)
    {
    case 1:
        return {"case1", {1, 2}, 4, 2, {4.0, 4.0}};
    case 2:
        return {"case2", {1, 2, 3}, 5, 3, {5.0, 5.0, 5.0}};
    case 3:
        return {"case3", {1, 2, 3}, 4, 3, {4.0, 4.0, 4.0}};
    case 4:
        return {"case4", {1, 2, 3, 4}, 4, 4, {4.0, 4.0, 4.0, 4.0}};
    default:
        break;
    }
    throw DomainError("unknown preset case " + std::to_string(id) + " (expected 1..4)");
}

ScenarioConfig default_scenario()
{
    const PropagationSpec propagation;
    const double lambda = propagation.wavelength;

    PairConfig pair;
    pair.pair_index = 1;
    pair.oam_mode = 1;
    pair.tx = UcaSpec::uniform(3, lambda);
    pair.rx_a = UcaSpec::uniform(4, lambda);
    pair.rx_b = UcaSpec::uniform(4, 2.0 * lambda);
    pair.geom_a = LinkGeometry::make(10.0);
    pair.geom_b = LinkGeometry::make(10.0);

    ScenarioConfig s;
    s.pairs = {pair};
    s.noise_power = 1e-9;
    s.power_budget = 1.0;
    s.propagation = propagation;
    s.tau_source = TauSource::table_preset;
    s.tau_sq = {4.0, 4.0, 4.0};
    s.exclusion = InterferenceExclusion::row_and_column;
    return s;
}

ScenarioConfig scenario_for_case(const ScenarioConfig &base, const ModeCase &mode_case)
{
    mode_case.validate();
    if (base.pairs.empty())
        throw DomainError("base scenario needs at least one pair");
    const double lambda = base.propagation.wavelength;
    const PairConfig &first = base.pairs.front();

    ScenarioConfig s = base;
    s.pairs.clear();
    s.tau_sq = mode_case.tau_sq;
    for (std::size_t k = 1; k <= mode_case.modes.size(); ++k)
    {
        const double kd = static_cast<double>(k);
        PairConfig pair;
        pair.pair_index = k;
        pair.oam_mode = mode_case.modes[k - 1];
        pair.tx = UcaSpec::uniform(mode_case.tx_count, kd * lambda);
        pair.rx_a = UcaSpec::uniform(mode_case.rx_count, (2.0 * kd - 1.0) * lambda);
        pair.rx_b = UcaSpec::uniform(mode_case.rx_count, 2.0 * kd * lambda);
        pair.geom_a = first.geom_a;
        pair.geom_b = first.geom_b;
        s.pairs.push_back(pair);
    }
    return s;
}

ModeCase resolve_case(const ScenarioConfig &scenario, int case_id)
{
    if (case_id != 0)
        return preset_case(case_id);
    if (scenario.pairs.empty())
        throw DomainError("scenario needs at least one pair");
    const PairConfig &pair = scenario.pairs.front();
    ModeCase c;
    c.name = "custom";
    for (const PairConfig &p : scenario.pairs)
        c.modes.push_back(p.oam_mode);
    c.rx_count = pair.rx_a.element_count;
    c.tx_count = pair.tx.element_count;
    c.tau_sq = scenario.tau_sq;
    // with Gram-derived eigenvalues the case list only has to pass validation
    if (scenario.tau_source == TauSource::computed_from_gram)
        c.tau_sq.assign(std::min(c.rx_count, c.tx_count), 1.0);
    return c;
}

ScenarioConfig scenario_for_id(const ScenarioConfig &base, int case_id)
{
    return case_id == 0 ? base : scenario_for_case(base, preset_case(case_id));
}

std::string case_label(int case_id)
{
    return case_id == 0 ? "custom" : "case" + std::to_string(case_id);
}

HarnessConfig parse_config(const std::string &text)
{
    json doc;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        doc = json::object();
    else
    {
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            const auto [line, column] = line_and_column(text, e.byte);
            throw ConfigError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                              ": " + e.what());
        }
    }
    check_keys(doc, "", {"scenario", "sweep", "fp"});

    HarnessConfig c;
    c.scenario = parse_scenario(doc.value("scenario", json::object()));
    c.sweep = parse_sweep(doc.value("sweep", json::object()));
    c.fp = parse_fp(doc.value("fp", json::object()));
    try
    {
        c.scenario.validate();
        c.sweep.validate();
        c.fp.validate();
        resolve_case(c.scenario, c.sweep.case_id).validate();
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const DomainError &e)
    {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return c;
}

HarnessConfig load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    try
    {
        return parse_config(text.str());
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

SchemeRun run_scheme(const ScenarioConfig &scenario, const ModeCase &mode_case, Scheme scheme, const FpConfig &fp,
                     const SweepSpec &options)
{
    SchemeRun total;
    for (std::size_t k = 0; k < scenario.pairs.size(); ++k)
    {
        SchemeRun run;
        if (scheme == Scheme::rs)
        {
            FpResult r = optimize(scenario, mode_case, fp, k);
            run = {r.report, r.state.converged, r.state.iterations_used};
        }
        else
        {
            BaselineParams params;
            params.kind = scheme == Scheme::sdma   ? BaselineKind::sdma
                          : scheme == Scheme::noma ? BaselineKind::noma
                                                   : BaselineKind::tdma;
            params.noma_strong = options.noma_strong;
            params.tdma = options.tdma;
            run = run_baseline(scenario, mode_case, fp, params, k);
        }
        add_report(total.report, run.report);
        total.converged = total.converged && run.converged;
        total.iterations = std::max(total.iterations, run.iterations);
    }
    return total;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig &scenario, SweepVariable variable, double value)
{
    ScenarioConfig s = scenario;
    if (variable == SweepVariable::power)
        s.power_budget = value;
    else
        for (PairConfig &pair : s.pairs)
        {
            pair.geom_a.distance = value;
            pair.geom_b.distance = value;
        }
    return s;
}

std::vector<ResultRow> run_sweep(const ScenarioConfig &scenario, const SweepSpec &sweep, const FpConfig &fp,
                                 std::size_t threads)
{
    const std::vector<double> values = sweep.values();
    fp.validate();
    const ScenarioConfig base = scenario_for_id(scenario, sweep.case_id);
    const ModeCase mode_case = resolve_case(base, sweep.case_id);
    base.validate();
    const std::string label = case_label(sweep.case_id);

    const std::size_t per_point = sweep.schemes.size();
    std::vector<ResultRow> rows(values.size() * per_point);
    std::vector<std::exception_ptr> errors(values.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++)
        {
            try
            {
                const ScenarioConfig point = apply_sweep_value(base, sweep.variable, values[i]);
                for (std::size_t j = 0; j < per_point; ++j)
                {
                    ResultRow &row = rows[i * per_point + j];
                    row.sweep_var = to_string(sweep.variable);
                    row.sweep_value = values[i];
                    row.scheme = to_string(sweep.schemes[j]);
                    row.case_label = label;
                    row.seed = fp.init_seed;
                    try
                    {
                        const SchemeRun run = run_scheme(point, mode_case, sweep.schemes[j], fp, sweep);
                        row.sum_capacity = run.report.sum;
                        row.cap_user_a = run.report.total_a;
                        row.cap_user_b = run.report.total_b;
                        row.converged = run.converged;
                        row.iterations = run.iterations;
                    }
                    catch (const NumericalError &)
                    {
                        row.converged = false;
                    }
                }
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };

    std::size_t count = threads != 0 ? threads : std::max(1U, std::thread::hardware_concurrency());
    count = std::min(count, values.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < count; ++t)
            pool.emplace_back(worker);
        worker();
    }
    for (const std::exception_ptr &e : errors)
        if (e)
            std::rethrow_exception(e);
    return rows;
}

std::string format_csv(const std::vector<ResultRow> &rows)
{
    std::string out = csv_header;
    out += '\n';
    for (const ResultRow &r : rows)
    {
        out += r.sweep_var + ',' + fmt9(r.sweep_value) + ',' + r.scheme + ',' + r.case_label + ',' +
               fmt9(r.sum_capacity) + ',' + fmt9(r.cap_user_a) + ',' + fmt9(r.cap_user_b) + ',' +
               (r.converged ? "true" : "false") + ',' + std::to_string(r.iterations) + ',' + std::to_string(r.seed) +
               '\n';
    }
    return out;
}

void emit_csv(const std::vector<ResultRow> &rows, const std::filesystem::path &path)
{
    const std::string text = format_csv(rows);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

std::vector<ResultRow> parse_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw DomainError("CSV header does not match the result schema");
    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 10)
            throw DomainError("CSV line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                              " fields, expected 10");
        try
        {
            ResultRow r;
            r.sweep_var = f[0];
            r.sweep_value = std::stod(f[1]);
            r.scheme = f[2];
            r.case_label = f[3];
            r.sum_capacity = std::stod(f[4]);
            r.cap_user_a = std::stod(f[5]);
            r.cap_user_b = std::stod(f[6]);
            if (f[7] != "true" && f[7] != "false")
                throw std::invalid_argument("converged");
            r.converged = f[7] == "true";
            r.iterations = std::stoull(f[8]);
            r.seed = std::stoull(f[9]);
            rows.push_back(std::move(r));
        }
        catch (const std::logic_error &)
        {
            throw DomainError("CSV line " + std::to_string(line_no) + " has a malformed field");
        }
    }
    return rows;
}

std::string trace_csv(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &fp)
{
    std::string out = "pair,iteration,surrogate,power_used\n";
    for (std::size_t k = 0; k < scenario.pairs.size(); ++k)
    {
        const std::string pair = std::to_string(scenario.pairs[k].pair_index);
        optimize(scenario, mode_case, fp, k, [&](const FpTraceRecord &r) {
            out += pair + ',' + std::to_string(r.iteration) + ',' + fmt9(r.surrogate) + ',' + fmt9(r.power_used) +
                   '\n';
        });
    }
    return out;
}

} // namespace oamrs
