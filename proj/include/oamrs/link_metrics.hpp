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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oamrs/channel_geometry.hpp"
#include "oamrs/rs_signal.hpp"

namespace oamrs {

enum class Receiver
{
    a, // UD_{2k-1}
    b, // UD_{2k}
};

/// One row of the mode-combination table: modes, array sizes and the Gram
/// eigenvalues tau^2 used in the capacity sums.
struct ModeCase
{
    std::string name;
    std::vector<int> modes;
    std::size_t rx_count = 1; // N
    std::size_t tx_count = 1; // M
    std::vector<double> tau_sq;

    void validate() const;
};

/// Per-(m, n) SINRs, rows = transmit elements, columns = receive elements.
struct SinrGrid
{
    Eigen::MatrixXd values;
};

/// Capacities of one user pair in bits/s/Hz.
struct RateReport
{
    double private_a = 0.0;
    double private_b = 0.0;
    double common_a = 0.0;
    double common_b = 0.0;
    double common_pair = 0.0;
    double split_a = 0.0;
    double split_b = 0.0;
    double sum = 0.0;
    double total_a = 0.0; // private_a + split_a
    double total_b = 0.0;
};

struct SplitPolicy
{
    enum class Kind
    {
        equal,
        all_to_a,
        all_to_b,
        ratio, // weight is the fraction given to user a
    };
    Kind kind = Kind::equal;
    double weight = 0.5;

    static SplitPolicy equal() { return {Kind::equal, 0.5}; }
    static SplitPolicy all_to_a() { return {Kind::all_to_a, 1.0}; }
    static SplitPolicy all_to_b() { return {Kind::all_to_b, 0.0}; }
    static SplitPolicy ratio(double weight_a) { return {Kind::ratio, weight_a}; }
};

/// Channels from one transmit UCA to both members of its pair.
struct PairChannels
{
    ChannelMatrix a;
    ChannelMatrix b;
};

/// Eigenvalue lists used in the capacity sums of each user.
struct PairTau
{
    std::vector<double> a;
    std::vector<double> b;
};

// Private-message SINRs of `target` (common message already removed by SIC).
SinrGrid sinr_private(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver target, double noise_power,
                      InterferenceExclusion exclusion = InterferenceExclusion::row_and_column);

// Common-message SINRs at `target`; all private power counts as interference.
SinrGrid sinr_common(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver target, double noise_power,
                     InterferenceExclusion exclusion = InterferenceExclusion::row_and_column);

/// sum over (m, n) and q of log2(1 + gamma_{m,n} tau_q^2 / M).
///
/// This is the grid-and-eigenvalue triple sum as the capacity model defines it,
/// so it grows with M * N * Q rather than with the channel rank alone.
double capacity_from_grid(const SinrGrid &grid, std::span<const double> tau_sq, std::size_t tx_count);
double capacity_from_grid(const SinrGrid &grid, const ModeCase &mode_case);

double common_pair_capacity(double common_a, double common_b);

std::pair<double, double> split_common(double common_pair, const SplitPolicy &policy);

// Assembles a report from the four per-user capacities.
RateReport make_report(double private_a, double private_b, double common_a, double common_b,
                       const SplitPolicy &policy = SplitPolicy::equal());

PairChannels pair_channels(const PairConfig &pair, const PropagationSpec &propagation);

// tau^2 per user: the preset list, or the top-min(N, M) normalized Gram eigenvalues.
PairTau resolve_tau(const ScenarioConfig &scenario, const PairChannels &channels);

RateReport evaluate_channels(const PairChannels &channels, const PairTau &tau, const RsPrecoder &precoder,
                             double noise_power, InterferenceExclusion exclusion,
                             const SplitPolicy &policy = SplitPolicy::equal());

RateReport evaluate_pair(const PairConfig &pair, const RsPrecoder &precoder, const ScenarioConfig &scenario,
                         const SplitPolicy &policy = SplitPolicy::equal());

} // namespace oamrs
