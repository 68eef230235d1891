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

#include "oamrs/link_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "oamrs/errors.hpp"

namespace oamrs {

namespace {

bool interferes(Eigen::Index m, Eigen::Index n, Eigen::Index mi, Eigen::Index ni, InterferenceExclusion exclusion)
{
    if (exclusion == InterferenceExclusion::row_and_column)
        return mi != m && ni != n;
    return mi != m || ni != n;
}

double cross_power(const Eigen::MatrixXcd &p, Eigen::Index m, Eigen::Index n, InterferenceExclusion exclusion)
{
    double sum = 0.0;
    for (Eigen::Index mi = 0; mi < p.rows(); ++mi)
        for (Eigen::Index ni = 0; ni < p.cols(); ++ni)
            if (interferes(m, n, mi, ni, exclusion))
                sum += std::norm(p(mi, ni));
    return sum;
}

void check_noise(double noise_power)
{
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
        throw DomainError("noise_power must be positive");
}

void check_dimensions(const ChannelMatrix &channel, const Eigen::MatrixXcd &signal, const RsPrecoder &precoder)
{
    if (channel.tx_count() != precoder.tx_count() || precoder.private_b.rows() != precoder.private_a.rows() ||
        precoder.common.rows() != precoder.private_a.rows())
        throw DomainError("transmit element count of channel and precoder disagree");
    if (static_cast<Eigen::Index>(channel.rx_count()) > signal.cols())
        throw DomainError("channel has " + std::to_string(channel.rx_count()) +
                          " receive elements but the precoder only " + std::to_string(signal.cols()));
}

} // namespace

void ModeCase::validate() const
{
    if (rx_count < 1 || tx_count < 1)
        throw DomainError("mode case dimensions must be positive");
    if (tau_sq.empty() || tau_sq.size() > std::min(rx_count, tx_count))
        throw DomainError("mode case " + name + ": number of eigenvalues must be in [1, min(N, M)]");
    for (double t : tau_sq)
        if (!(t > 0.0) || !std::isfinite(t))
            throw DomainError("mode case " + name + ": eigenvalues must be positive");
}

SinrGrid sinr_private(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver target, double noise_power,
                      InterferenceExclusion exclusion)
{
    check_noise(noise_power);
    const Eigen::MatrixXcd &own = target == Receiver::a ? precoder.private_a : precoder.private_b;
    const Eigen::MatrixXcd &other = target == Receiver::a ? precoder.private_b : precoder.private_a;
    check_dimensions(channel, own, precoder);
    if (static_cast<Eigen::Index>(channel.rx_count()) != own.cols())
        throw DomainError("private precoder width must equal the receiver element count");

    const double other_power = other.squaredNorm();
    SinrGrid grid;
    grid.values.resize(own.rows(), own.cols());
    for (Eigen::Index m = 0; m < own.rows(); ++m)
        for (Eigen::Index n = 0; n < own.cols(); ++n)
        {
            const double gain = std::norm(channel.entries(n, m));
            const double signal = gain * std::norm(own(m, n));
            const double interference = gain * (other_power + cross_power(own, m, n, exclusion));
            grid.values(m, n) = signal / (interference + noise_power);
        }
    return grid;
}

SinrGrid sinr_common(const ChannelMatrix &channel, const RsPrecoder &precoder, Receiver target, double noise_power,
                     InterferenceExclusion exclusion)
{
    check_noise(noise_power);
    check_dimensions(channel, precoder.common, precoder);
    (void)target; // both users see the same interference structure; only their channels differ

    const double private_power = precoder.private_a.squaredNorm() + precoder.private_b.squaredNorm();
    const auto cols = static_cast<Eigen::Index>(channel.rx_count());
    SinrGrid grid;
    grid.values.resize(precoder.common.rows(), cols);
    for (Eigen::Index m = 0; m < precoder.common.rows(); ++m)
        for (Eigen::Index n = 0; n < cols; ++n)
        {
            const double gain = std::norm(channel.entries(n, m));
            const double signal = gain * std::norm(precoder.common(m, n));
            const double interference = gain * (private_power + cross_power(precoder.common, m, n, exclusion));
            grid.values(m, n) = signal / (interference + noise_power);
        }
    return grid;
}

double capacity_from_grid(const SinrGrid &grid, std::span<const double> tau_sq, std::size_t tx_count)
{
    if (tx_count < 1)
        throw DomainError("tx_count must be positive");
    const double inv_m = 1.0 / static_cast<double>(tx_count);
    double capacity = 0.0;
    for (Eigen::Index i = 0; i < grid.values.size(); ++i)
        for (double tau : tau_sq)
            capacity += std::log2(1.0 + grid.values(i) * inv_m * tau);
    return capacity;
}

double capacity_from_grid(const SinrGrid &grid, const ModeCase &mode_case)
{
    if (grid.values.rows() != static_cast<Eigen::Index>(mode_case.tx_count) ||
        grid.values.cols() != static_cast<Eigen::Index>(mode_case.rx_count))
        throw DomainError("SINR grid is " + std::to_string(grid.values.rows()) + "x" +
                          std::to_string(grid.values.cols()) + ", mode case " + mode_case.name + " expects " +
                          std::to_string(mode_case.tx_count) + "x" + std::to_string(mode_case.rx_count));
    return capacity_from_grid(grid, mode_case.tau_sq, mode_case.tx_count);
}

double common_pair_capacity(double common_a, double common_b)
{
    return std::min(common_a, common_b);
}

std::pair<double, double> split_common(double common_pair, const SplitPolicy &policy)
{
    if (!(common_pair >= 0.0))
        throw DomainError("common capacity must be nonnegative");
    switch (policy.kind)
    {
    case SplitPolicy::Kind::equal:
        return {0.5 * common_pair, 0.5 * common_pair};
    case SplitPolicy::Kind::all_to_a:
        return {common_pair, 0.0};
    case SplitPolicy::Kind::all_to_b:
        return {0.0, common_pair};
    case SplitPolicy::Kind::ratio:
        break;
    }
    if (!(policy.weight >= 0.0 && policy.weight <= 1.0))
        throw DomainError("split weight must lie in [0, 1]");
    const double to_a = policy.weight * common_pair;
    return {to_a, common_pair - to_a};
}

RateReport make_report(double private_a, double private_b, double common_a, double common_b,
                       const SplitPolicy &policy)
{
    RateReport r;
    r.private_a = private_a;
    r.private_b = private_b;
    r.common_a = common_a;
    r.common_b = common_b;
    r.common_pair = common_pair_capacity(common_a, common_b);
    std::tie(r.split_a, r.split_b) = split_common(r.common_pair, policy);
    r.total_a = r.private_a + r.split_a;
    r.total_b = r.private_b + r.split_b;
    r.sum = r.private_a + r.private_b + r.split_a + r.split_b;
    return r;
}

PairChannels pair_channels(const PairConfig &pair, const PropagationSpec &propagation)
{
    return {channel_matrix(pair.tx, pair.rx_a, pair.geom_a, propagation),
            channel_matrix(pair.tx, pair.rx_b, pair.geom_b, propagation)};
}

PairTau resolve_tau(const ScenarioConfig &scenario, const PairChannels &channels)
{
    if (scenario.tau_source == TauSource::table_preset)
        return {scenario.tau_sq, scenario.tau_sq};

    auto computed = [](const ChannelMatrix &h) {
        std::vector<double> values = gram_eigenvalues(h, true);
        values.resize(std::min(h.rx_count(), h.tx_count()));
        return values;
    };
    return {computed(channels.a), computed(channels.b)};
}

RateReport evaluate_channels(const PairChannels &channels, const PairTau &tau, const RsPrecoder &precoder,
                             double noise_power, InterferenceExclusion exclusion, const SplitPolicy &policy)
{
    const std::size_t m = precoder.tx_count();
    const double private_a =
        capacity_from_grid(sinr_private(channels.a, precoder, Receiver::a, noise_power, exclusion), tau.a, m);
    const double private_b =
        capacity_from_grid(sinr_private(channels.b, precoder, Receiver::b, noise_power, exclusion), tau.b, m);
    const double common_a =
        capacity_from_grid(sinr_common(channels.a, precoder, Receiver::a, noise_power, exclusion), tau.a, m);
    const double common_b =
        capacity_from_grid(sinr_common(channels.b, precoder, Receiver::b, noise_power, exclusion), tau.b, m);
    return make_report(private_a, private_b, common_a, common_b, policy);
}

RateReport evaluate_pair(const PairConfig &pair, const RsPrecoder &precoder, const ScenarioConfig &scenario,
                         const SplitPolicy &policy)
{
    pair.validate();
    const PairChannels channels = pair_channels(pair, scenario.propagation);
    return evaluate_channels(channels, resolve_tau(scenario, channels), precoder, scenario.noise_power,
                             scenario.exclusion, policy);
}

} // namespace oamrs
