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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "oamrs/link_metrics.hpp"
#include "oamrs/rs_signal.hpp"

namespace oamrs {

enum class Stream : std::size_t
{
    private_a = 0,
    private_b = 1,
    common = 2,
};

inline constexpr std::size_t stream_count = 3;

// How a stream's power enters a ratio's denominator.
enum class Coupling
{
    none,
    full,  // every entry of the stream
    cross, // entries selected by the scenario's InterferenceExclusion rule
};

/// One family of SINR ratios: stream `signal` decoded at `receiver`, one ratio
/// per (m, n) cell, with the listed interference couplings.
struct RatioFamily
{
    Receiver receiver = Receiver::a;
    Stream signal = Stream::private_a;
    std::array<Coupling, stream_count> coupling{};
};

enum class GroupRole
{
    private_a,
    private_b,
    common,
};

/// A rate term of the objective: the minimum capacity over its member families.
struct RateGroup
{
    GroupRole role = GroupRole::private_a;
    std::vector<std::size_t> members;
};

/// Which ratios make up the sum capacity, and which streams may carry power.
///
/// Rate splitting uses four families (private a, private b, common at a,
/// common at b) and three groups; the baselines reuse the same machinery with
/// fewer streams.
struct RateStructure
{
    std::vector<RatioFamily> families;
    std::vector<RateGroup> groups;
    std::array<bool, stream_count> active{true, true, true};

    static RateStructure rate_splitting();
    static RateStructure sdma();
    // `strong` cancels the weak user's stream before decoding its own.
    static RateStructure noma(Receiver strong);
    static RateStructure single_user(Receiver user);
};

struct FpProblem
{
    PairChannels channels;
    PairTau tau;
    double noise_power = 1e-9;
    double power_budget = 1.0;
    InterferenceExclusion exclusion = InterferenceExclusion::row_and_column;
    RateStructure structure = RateStructure::rate_splitting();

    std::size_t tx_count() const { return channels.a.tx_count(); }
    void validate() const;
};

/// Auxiliary variables y, one M x N array per ratio family (same order as
/// RateStructure::families). For rate splitting the order is private a,
/// private b, common at a, common at b.
struct AuxiliarySet
{
    std::vector<Eigen::MatrixXcd> values;

    const Eigen::MatrixXcd &y_private_a() const { return values.at(0); }
    const Eigen::MatrixXcd &y_private_b() const { return values.at(1); }
    const Eigen::MatrixXcd &y_common_a() const { return values.at(2); }
    const Eigen::MatrixXcd &y_common_b() const { return values.at(3); }
};

/// Numerator a = h p and denominator b (interference plus noise) of one ratio.
struct AuxTerms
{
    cdouble a;
    double b = 0.0;

    double ratio() const { return std::norm(a) / b; }
};

struct FpConfig
{
    double convergence_threshold = 1e-4; // Gamma, bits/s/Hz
    std::size_t max_outer_iterations = 500;
    std::size_t inner_step_count = 100;
    double inner_step_size = 0.1; // first trial step, as a fraction of sqrt(P_T)
    std::uint64_t init_seed = 1;
    double init_scale = 1.0; // initial total power as a fraction of P_T

    void validate() const;
};

struct FpTraceRecord
{
    std::size_t iteration = 0;
    double surrogate = 0.0;
    double power_used = 0.0;
};

using FpTraceSink = std::function<void(const FpTraceRecord &)>;

struct FpState
{
    RsPrecoder precoder;
    AuxiliarySet auxiliaries;
    std::vector<double> objective_trace;
    bool converged = false;
    std::size_t iterations_used = 0;
};

struct FpResult
{
    FpState state;
    RateReport report;
};

// Terms of the private ratio at cell (m, n), 0-based; the interference sums follow sinr_private.
AuxTerms aux_terms_private(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver target,
                           double noise_power, std::size_t m, std::size_t n,
                           InterferenceExclusion exclusion = InterferenceExclusion::row_and_column);

AuxTerms aux_terms_common(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver target,
                          double noise_power, std::size_t m, std::size_t n,
                          InterferenceExclusion exclusion = InterferenceExclusion::row_and_column);

// y = a / b for every ratio, at the given precoder.
AuxiliarySet update_auxiliaries(const FpProblem &problem, const RsPrecoder &precoder);

// Sum capacity of the structure at `precoder` with exact SINRs.
double true_objective(const FpProblem &problem, const RsPrecoder &precoder);

/// Sum capacity with each SINR replaced by 2 Re{conj(y) a} - |y|^2 b.
///
/// Returns -infinity when some log argument 1 + q tau^2 / M is not positive,
/// which only happens far from the auxiliaries' own precoder.
double surrogate_objective(const FpProblem &problem, const RsPrecoder &precoder, const AuxiliarySet &auxiliaries);

/// Ascent direction dS/dRe(p) + i dS/dIm(p) for every precoder entry.
///
/// For the min over the two common capacities the smaller branch is
/// differentiated (the a-branch on an exact tie). Inactive streams get zero.
RsPrecoder surrogate_gradient(const FpProblem &problem, const RsPrecoder &precoder, const AuxiliarySet &auxiliaries);

/// Projected gradient ascent on the surrogate with the auxiliaries held fixed.
///
/// The input is first projected onto the power ball. Each of the
/// `inner_step_count` steps moves by inner_step_size * sqrt(P_T) along the
/// normalized gradient, projects, and halves the step (up to 20 times) until
/// the surrogate does not decrease.
RsPrecoder inner_step(const FpProblem &problem, const RsPrecoder &precoder, const AuxiliarySet &auxiliaries,
                      const FpConfig &config);

// Seeded circularly-symmetric Gaussian start scaled to init_scale * P_T; inactive streams are zero.
RsPrecoder initial_precoder(const FpProblem &problem, const FpConfig &config);

/// Alternating quadratic-transform optimization of the structure's sum capacity.
///
/// Starting from initial_precoder, each outer iteration refreshes the
/// auxiliaries, runs inner_step and records the surrogate; it stops once the
/// surrogate gains no more than the convergence threshold. The report is the
/// exact objective at the final precoder.
FpResult optimize(const FpProblem &problem, const FpConfig &config, const SplitPolicy &policy = SplitPolicy::equal(),
                  const FpTraceSink &trace = {});

// Builds the problem for pair `pair_index` (0-based) of the scenario under `mode_case`.
FpProblem make_problem(const ScenarioConfig &scenario, const ModeCase &mode_case, std::size_t pair_index = 0,
                       RateStructure structure = RateStructure::rate_splitting());

FpResult optimize(const ScenarioConfig &scenario, const ModeCase &mode_case, const FpConfig &config,
                  std::size_t pair_index = 0, const FpTraceSink &trace = {});

// Exact capacities of `precoder` mapped onto a report (groups by role).
RateReport structure_report(const FpProblem &problem, const RsPrecoder &precoder,
                            const SplitPolicy &policy = SplitPolicy::equal());

} // namespace oamrs
