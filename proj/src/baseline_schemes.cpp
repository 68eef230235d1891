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

#include "oamrs/baseline_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "oamrs/errors.hpp"

namespace oamrs {

namespace {

SchemeRun run_structure(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                        std::size_t pair_index, RateStructure structure)
{
    const FpProblem problem = make_problem(scenario, mode_case, pair_index, std::move(structure));
    FpResult r = optimize(problem, config);
    return {r.report, r.state.converged, r.state.iterations_used};
}

SchemeRun run_sdma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                   std::size_t pair_index)
{
    return run_structure(scenario, mode_case, config, pair_index, RateStructure::sdma());
}

SchemeRun run_noma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                   std::size_t pair_index, std::optional<Receiver> strong)
{
    FpProblem problem = make_problem(scenario, mode_case, pair_index, RateStructure::sdma());
    problem.structure = RateStructure::noma(strong.value_or(noma_default_strong(problem.channels)));
    FpResult r = optimize(problem, config);
    return {r.report, r.state.converged, r.state.iterations_used};
}

SchemeRun run_tdma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                   const TdmaFractions &fractions, std::size_t pair_index)
{
    fractions.validate();
    SchemeRun a, b;
    if (fractions.a > 0.0)
        a = run_structure(scenario, mode_case, config, pair_index, RateStructure::single_user(Receiver::a));
    if (fractions.b > 0.0)
        b = run_structure(scenario, mode_case, config, pair_index, RateStructure::single_user(Receiver::b));
    return {tdma_report(a.report.sum, b.report.sum, fractions), a.converged && b.converged,
            std::max(a.iterations, b.iterations)};
}

} // namespace

void TdmaFractions::validate() const
{
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("TDMA fractions must be nonnegative");
    if (std::abs(a + b - 1.0) > 1e-12)
        throw DomainError("TDMA fractions must sum to 1");
}

RateReport evaluate_sdma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                         std::size_t pair_index)
{
    return run_sdma(scenario, mode_case, config, pair_index).report;
}

Receiver noma_default_strong(const PairChannels &channels)
{
    const double mean_a = channels.a.entries.cwiseAbs2().mean();
    const double mean_b = channels.b.entries.cwiseAbs2().mean();
    return mean_b > mean_a ? Receiver::b : Receiver::a;
}

RateReport evaluate_noma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                         std::size_t pair_index, std::optional<Receiver> strong)
{
    return run_noma(scenario, mode_case, config, pair_index, strong).report;
}

double single_user_capacity(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                            Receiver user, std::size_t pair_index)
{
    return run_structure(scenario, mode_case, config, pair_index, RateStructure::single_user(user)).report.sum;
}

RateReport tdma_report(double single_a, double single_b, const TdmaFractions &fractions)
{
    fractions.validate();
    return make_report(fractions.a * single_a, fractions.b * single_b, 0.0, 0.0);
}

RateReport evaluate_tdma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                         const TdmaFractions &fractions, std::size_t pair_index)
{
    return run_tdma(scenario, mode_case, config, fractions, pair_index).report;
}

RateReport evaluate_baseline(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                             const BaselineParams &params, std::size_t pair_index)
{
    return run_baseline(scenario, mode_case, config, params, pair_index).report;
}

SchemeRun run_baseline(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                       const BaselineParams &params, std::size_t pair_index)
{
    switch (params.kind)
    {
    case BaselineKind::sdma:
        return run_sdma(scenario, mode_case, config, pair_index);
    case BaselineKind::noma:
        return run_noma(scenario, mode_case, config, pair_index, params.noma_strong);
    case BaselineKind::tdma:
        break;
    }
    return run_tdma(scenario, mode_case, config, params.tdma, pair_index);
}

} // namespace oamrs
