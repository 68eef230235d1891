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
#include <optional>

#include "oamrs/fp_precoder.hpp"
#include "oamrs/link_metrics.hpp"
#include "oamrs/rs_signal.hpp"

namespace oamrs {

enum class BaselineKind
{
    sdma,
    noma,
    tdma,
};

struct TdmaFractions
{
    double a = 0.5;
    double b = 0.5;

    // Nonnegative, summing to 1 within 1e-12. Throws DomainError otherwise.
    void validate() const;
};

struct BaselineParams
{
    BaselineKind kind = BaselineKind::sdma;
    // User that decodes its own stream last; unset picks the larger mean channel gain.
    std::optional<Receiver> noma_strong;
    TdmaFractions tdma;
};

// A report with the optimizer status behind it (worst case over the runs involved).
struct SchemeRun
{
    RateReport report;
    bool converged = true;
    std::size_t iterations = 0;
};

// Both private streams optimized with the common stream held at zero.
RateReport evaluate_sdma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                         std::size_t pair_index = 0);

// Strong user: the one whose channel has the larger mean |h|^2 (user a on ties).
Receiver noma_default_strong(const PairChannels &channels);

/// Two-user power-domain NOMA.
///
/// The strong user removes the weak user's stream by SIC before decoding its
/// own; the weak user treats the strong stream as interference. The weak rate
/// is the smaller of its capacities at the two receivers, so the strong user
/// can always decode it.
RateReport evaluate_noma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                         std::size_t pair_index = 0, std::optional<Receiver> strong = std::nullopt);

// Capacity of `user` served alone with the full budget (same-user cross terms kept).
double single_user_capacity(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                            Receiver user, std::size_t pair_index = 0);

// Time sharing: user u gets fraction f_u of its single-user capacity.
RateReport tdma_report(double single_a, double single_b, const TdmaFractions &fractions);

RateReport evaluate_tdma(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                         const TdmaFractions &fractions = {}, std::size_t pair_index = 0);

RateReport evaluate_baseline(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                             const BaselineParams &params, std::size_t pair_index = 0);

SchemeRun run_baseline(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                       const BaselineParams &params, std::size_t pair_index = 0);

} // namespace oamrs
