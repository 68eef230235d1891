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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oamrs/baseline_schemes.hpp"
#include "oamrs/channel_geometry.hpp"
#include "oamrs/fp_precoder.hpp"
#include "oamrs/rs_signal.hpp"
#include "oamrs/sim_harness.hpp"

#ifndef OAMRS_CLI_PATH
#error "OAMRS_CLI_PATH must name the command-line binary"
#endif

using namespace oamrs;

namespace {

struct Outcome
{
    bool pass = true;
    std::string detail;
};

std::string fmt(const char *format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

constexpr double toy_grid_optimum = 3.4594316186372978;
constexpr double toy_sdma_grid_optimum = 3.4594316186372978;

ChannelMatrix scalar_channel(double h)
{
    Eigen::MatrixXcd e(1, 1);
    e(0, 0) = h;
    return ChannelMatrix::from_entries(e);
}

FpProblem toy_problem(RateStructure structure)
{
    FpProblem p;
    p.channels = {scalar_channel(1.0), scalar_channel(0.5)};
    p.tau = {{1.0}, {1.0}};
    p.noise_power = 0.1;
    p.power_budget = 1.0;
    p.structure = std::move(structure);
    return p;
}

ChannelMatrix random_channel(std::mt19937_64 &rng, Eigen::Index n, Eigen::Index m)
{
    std::normal_distribution<double> z;
    Eigen::MatrixXcd e(n, m);
    for (Eigen::Index i = 0; i < e.size(); ++i)
        e(i) = {z(rng), z(rng)};
    return ChannelMatrix::from_entries(e);
}

RsPrecoder random_precoder(std::mt19937_64 &rng, std::size_t m, std::size_t na, std::size_t nb)
{
    std::normal_distribution<double> z;
    RsPrecoder p = RsPrecoder::zeros(m, na, nb);
    for (Eigen::MatrixXcd *s : {&p.private_a, &p.private_b, &p.common})
        for (Eigen::Index i = 0; i < s->size(); ++i)
            (*s)(i) = {z(rng), z(rng)};
    return p;
}

Eigen::MatrixXcd &stream(RsPrecoder &p, int j)
{
    return j == 0 ? p.private_a : j == 1 ? p.private_b : p.common;
}

const ScenarioConfig &scenario()
{
    static const ScenarioConfig s = default_scenario();
    return s;
}

ModeCase default_case()
{
    return resolve_case(scenario(), 0);
}

Outcome tightness()
{
    const FpProblem problem = make_problem(scenario(), default_case());
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        RsPrecoder p = random_precoder(rng, problem.tx_count(), 4, 4);
        p = std::sqrt(problem.power_budget * u(rng) / total_power(p)) * p;
        const double gap =
            std::abs(surrogate_objective(problem, p, update_auxiliaries(problem, p)) - true_objective(problem, p));
        worst = std::max(worst, gap);
    }
    return {worst <= 1e-9, fmt("max |surrogate - objective| = %.3g over 1000 precoders", worst)};
}

Outcome convergence()
{
    std::size_t bad_trace = 0, unconverged = 0, max_iter = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        FpConfig c;
        c.init_seed = seed;
        const FpResult r = optimize(scenario(), default_case(), c);
        const auto &t = r.state.objective_trace;
        for (std::size_t i = 1; i < t.size(); ++i)
            if (t[i] < t[i - 1] - 1e-9)
            {
                ++bad_trace;
                break;
            }
        unconverged += !r.state.converged;
        max_iter = std::max(max_iter, r.state.iterations_used);
    }
    return {bad_trace == 0 && unconverged == 0,
            fmt("%g non-monotone traces, %g unconverged, max %g outer iterations", static_cast<double>(bad_trace),
                static_cast<double>(unconverged), static_cast<double>(max_iter))};
}

Outcome oracle_proximity()
{
    const FpConfig c;
    const double rs = optimize(toy_problem(RateStructure::rate_splitting()), c).report.sum;
    const double sdma = optimize(toy_problem(RateStructure::sdma()), c).report.sum;
    const double e_rs = std::abs(rs - toy_grid_optimum) / toy_grid_optimum;
    const double e_sdma = std::abs(sdma - toy_sdma_grid_optimum) / toy_sdma_grid_optimum;
    return {e_rs <= 0.02 && e_sdma <= 0.02,
            fmt("RS %.6f (rel err %.3g), ", rs, e_rs) + fmt("SDMA %.6f (rel err %.3g), grid optimum %.6f", sdma,
                                                             e_sdma, toy_grid_optimum)};
}

Outcome gradient_check()
{
    std::mt19937_64 rng(103);
    const std::vector<RateStructure> structures{RateStructure::rate_splitting(), RateStructure::sdma(),
                                                RateStructure::noma(Receiver::a), RateStructure::noma(Receiver::b)};
    const double h = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t m = 1 + trial % 3, n = 1 + (trial / 3) % 4;
        FpProblem problem;
        const auto mi = static_cast<Eigen::Index>(m), ni = static_cast<Eigen::Index>(n);
        problem.channels = {random_channel(rng, ni, mi), random_channel(rng, ni, mi)};
        std::vector<double> tau;
        for (std::size_t q = 0; q < std::min(m, n); ++q)
            tau.push_back(1.0 + static_cast<double>(q));
        problem.tau = {tau, tau};
        problem.noise_power = 0.3;
        problem.power_budget = 2.0;
        problem.exclusion = trial % 2 ? InterferenceExclusion::entry_only : InterferenceExclusion::row_and_column;
        problem.structure = structures[static_cast<std::size_t>(trial) % structures.size()];

        RsPrecoder base = random_precoder(rng, m, n, n);
        for (int j = 0; j < 3; ++j)
            if (!problem.structure.active[static_cast<std::size_t>(j)])
                stream(base, j).setZero();
        const AuxiliarySet y = update_auxiliaries(problem, base);
        RsPrecoder p = 0.8 * base;
        RsPrecoder g = surrogate_gradient(problem, p, y);

        double diff = 0.0, norm = 0.0;
        for (int j = 0; j < 3; ++j)
        {
            if (!problem.structure.active[static_cast<std::size_t>(j)])
                continue;
            for (Eigen::Index i = 0; i < stream(p, j).size(); ++i)
            {
                cdouble fd;
                for (cdouble dir : {cdouble(1.0, 0.0), cdouble(0.0, 1.0)})
                {
                    RsPrecoder plus = p, minus = p;
                    stream(plus, j)(i) += h * dir;
                    stream(minus, j)(i) -= h * dir;
                    fd += dir * (surrogate_objective(problem, plus, y) - surrogate_objective(problem, minus, y)) /
                          (2.0 * h);
                }
                diff += std::norm(fd - stream(g, j)(i));
                norm += std::norm(stream(g, j)(i));
            }
        }
        worst = std::max(worst, norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff));
    }
    return {worst <= 1e-4, fmt("worst relative gradient error %.3g over 100 instances", worst)};
}

Outcome table_eigenvalues()
{
    const double lambda = scenario().propagation.wavelength;
    double worst = 0.0;
    bool sizes_ok = true;
    for (int id = 1; id <= 4; ++id)
    {
        const ModeCase c = preset_case(id);
        const std::vector<double> e = gram_eigenvalues(oam_mode_matrix(UcaSpec::uniform(c.rx_count, lambda), c.modes));
        if (e.size() != c.tau_sq.size())
        {
            sizes_ok = false;
            continue;
        }
        for (std::size_t i = 0; i < e.size(); ++i)
            worst = std::max(worst, std::abs(e[i] - c.tau_sq[i]));
    }
    return {sizes_ok && worst <= 1e-9, fmt("max eigenvalue deviation %.3g across cases 1-4", worst)};
}

Outcome orthogonality()
{
    double worst_dot = 0.0;
    for (std::size_t m = 1; m <= 8; ++m)
        for (int l = -8; l <= 8; ++l)
            for (int k = -8; k <= 8; ++k)
                if ((l - k) % static_cast<int>(m) != 0)
                    worst_dot = std::max(worst_dot, std::abs(steering_vector(m, l).dot(steering_vector(m, k))));

    double worst_circ = 0.0;
    const PropagationSpec prop;
    for (std::size_t n = 2; n <= 6; ++n)
    {
        const ChannelMatrix h = channel_matrix(UcaSpec::uniform(n, prop.wavelength),
                                               UcaSpec::uniform(n, 2.0 * prop.wavelength), LinkGeometry::make(10.0),
                                               prop);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
            {
                const auto shifted_r = static_cast<Eigen::Index>((r + 1) % n);
                const auto shifted_c = static_cast<Eigen::Index>((c + 1) % n);
                worst_circ = std::max(worst_circ, std::abs(h.entries(shifted_r, shifted_c) -
                                                           h.entries(static_cast<Eigen::Index>(r),
                                                                     static_cast<Eigen::Index>(c))));
            }
    }
    return {worst_dot <= 1e-10 && worst_circ <= 1e-12,
            fmt("max inner product %.3g, max circulant defect %.3g", worst_dot, worst_circ)};
}

// Criteria 7 to 9 compare optimized values against each other with tolerances far
// below the default stopping threshold, so they use a tighter one.
FpConfig reference_fp()
{
    FpConfig c;
    c.convergence_threshold = 1e-9;
    c.max_outer_iterations = 5000;
    return c;
}

// Shared sweep results for criteria 7 to 9.
struct SweepData
{
    std::vector<std::vector<ResultRow>> distance; // per preset case, RS and SDMA
    std::vector<ResultRow> power;                 // default scenario, RS and SDMA
};

const SweepData &sweeps()
{
    static const SweepData data = [] {
        SweepData d;
        for (int id = 1; id <= 4; ++id)
        {
            SweepSpec s;
            s.variable = SweepVariable::distance;
            s.start = 5.0;
            s.stop = 50.0;
            s.points = 10;
            s.case_id = id;
            s.schemes = {Scheme::rs, Scheme::sdma};
            d.distance.push_back(run_sweep(scenario(), s, reference_fp()));
        }
        SweepSpec s;
        s.variable = SweepVariable::power;
        s.start = 0.1;
        s.stop = 10.0;
        s.points = 10;
        s.case_id = 0;
        s.schemes = {Scheme::rs, Scheme::sdma};
        d.power = run_sweep(scenario(), s, reference_fp());
        return d;
    }();
    return data;
}

std::vector<ResultRow> rows_for(const std::vector<ResultRow> &rows, const std::string &scheme)
{
    std::vector<ResultRow> out;
    for (const ResultRow &r : rows)
        if (r.scheme == scheme)
            out.push_back(r);
    return out;
}

Outcome distance_trend()
{
    std::string detail;
    std::size_t violations = 0;
    for (const auto &sweep : sweeps().distance)
    {
        const auto rs = rows_for(sweep, "rs");
        for (std::size_t i = 1; i < rs.size(); ++i)
            if (rs[i].sum_capacity > rs[i - 1].sum_capacity)
            {
                ++violations;
                detail += " [" + rs[i].case_label +
                          fmt(" d=%g: %.6f > %.6f]", rs[i].sweep_value, rs[i].sum_capacity, rs[i - 1].sum_capacity);
            }
    }
    return {violations == 0, fmt("%g increases across 4 cases x 10 distances", static_cast<double>(violations)) +
                                 detail};
}

Outcome power_trend()
{
    const auto rs = rows_for(sweeps().power, "rs");
    const auto sdma = rows_for(sweeps().power, "sdma");
    std::string detail;
    std::size_t violations = 0;
    for (std::size_t i = 1; i < rs.size(); ++i)
        if (rs[i].sum_capacity < rs[i - 1].sum_capacity)
        {
            ++violations;
            detail += fmt(" [P=%g: %.6f < %.6f]", rs[i].sweep_value, rs[i].sum_capacity, rs[i - 1].sum_capacity);
        }
    const double margin = rs.back().sum_capacity - sdma.back().sum_capacity;
    return {violations == 0 && margin > 0.0,
            fmt("%g decreases; RS - SDMA at P=%g W: %.6g", static_cast<double>(violations), rs.back().sweep_value,
                margin) +
                detail};
}

Outcome dominance()
{
    std::size_t instances = 0, violations = 0;
    double worst = 0.0;
    auto compare = [&](const std::vector<ResultRow> &rows) {
        const auto rs = rows_for(rows, "rs");
        const auto sdma = rows_for(rows, "sdma");
        for (std::size_t i = 0; i < rs.size(); ++i)
        {
            ++instances;
            const double gap = rs[i].sum_capacity - sdma[i].sum_capacity;
            worst = std::min(worst, gap);
            violations += gap < -1e-6;
        }
    };
    for (const auto &sweep : sweeps().distance)
        compare(sweep);
    compare(sweeps().power);

    const FpConfig c = reference_fp();
    const double gap = optimize(toy_problem(RateStructure::rate_splitting()), c).report.sum -
                       optimize(toy_problem(RateStructure::sdma()), c).report.sum;
    ++instances;
    worst = std::min(worst, gap);
    violations += gap < -1e-6;

    return {violations == 0, fmt("%g of %g instances with RS < SDMA - 1e-6, worst gap %.3g",
                                 static_cast<double>(violations), static_cast<double>(instances), worst)};
}

std::string read_file(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism()
{
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "oamrs_acceptance";
    std::filesystem::create_directories(dir);
    const std::filesystem::path config = dir / "config.json";
    {
        std::ofstream out(config, std::ios::binary);
        out << R"({"sweep": {"variable": "distance", "start": 5, "stop": 50, "points": 4, "case_id": 3,
  "schemes": ["rs", "sdma", "noma", "tdma"]}})";
    }
    std::vector<std::string> outputs;
    for (int run = 0; run < 2; ++run)
    {
        const std::filesystem::path csv = dir / ("run" + std::to_string(run) + ".csv");
        std::filesystem::remove(csv);
        const std::string cmd = std::string("\"") + OAMRS_CLI_PATH + "\" sweep --config \"" + config.string() +
                                "\" --seed 7 --out \"" + csv.string() + "\"";
        if (std::system(cmd.c_str()) != 0)
            return {false, "CLI sweep exited with an error"};
        outputs.push_back(read_file(csv));
    }
    const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
    std::filesystem::remove_all(dir);
    return {same, fmt("two runs, %g bytes each, %s", static_cast<double>(outputs[0].size())) +
                      (same ? "identical" : "different")};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"quadratic-transform tightness", tightness},
        {"monotone convergence", convergence},
        {"oracle proximity", oracle_proximity},
        {"gradient check", gradient_check},
        {"mode-case eigenvalues", table_eigenvalues},
        {"mode orthogonality", orthogonality},
        {"distance trend", distance_trend},
        {"power trend", power_trend},
        {"dominance", dominance},
        {"determinism", determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::printf("%s criterion %zu (%s): %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
