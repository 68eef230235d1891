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

#include "oamrs/rs_signal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "oamrs/errors.hpp"

namespace oamrs {

RsPrecoder RsPrecoder::zeros(std::size_t tx_count, std::size_t rx_a, std::size_t rx_b)
{
    const auto m = static_cast<Eigen::Index>(tx_count);
    RsPrecoder p;
    p.private_a = Eigen::MatrixXcd::Zero(m, static_cast<Eigen::Index>(rx_a));
    p.private_b = Eigen::MatrixXcd::Zero(m, static_cast<Eigen::Index>(rx_b));
    p.common = Eigen::MatrixXcd::Zero(m, static_cast<Eigen::Index>(std::max(rx_a, rx_b)));
    return p;
}

bool RsPrecoder::all_finite() const
{
    return private_a.allFinite() && private_b.allFinite() && common.allFinite();
}

bool RsPrecoder::is_zero() const
{
    return private_a.isZero(0.0) && private_b.isZero(0.0) && common.isZero(0.0);
}

RsPrecoder operator*(double scale, const RsPrecoder &precoder)
{
    return {scale * precoder.private_a, scale * precoder.private_b, scale * precoder.common};
}

void PairConfig::validate() const
{
    tx.validate();
    rx_a.validate();
    rx_b.validate();
    geom_a.validate();
    geom_b.validate();
    if (rx_a.element_count != rx_b.element_count)
        throw DomainError("pair " + std::to_string(pair_index) +
                          ": receivers must have equal element counts (common index is shared)");
}

void ScenarioConfig::validate() const
{
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
        throw DomainError("noise_power must be positive");
    if (!(power_budget > 0.0) || !std::isfinite(power_budget))
        throw DomainError("power_budget must be positive");
    propagation.validate();
    if (pairs.empty())
        throw DomainError("scenario needs at least one pair");
    std::set<int> modes;
    for (const PairConfig &pair : pairs)
    {
        pair.validate();
        if (!modes.insert(pair.oam_mode).second)
            throw DomainError("OAM mode " + std::to_string(pair.oam_mode) + " is used by more than one pair");
    }
    if (tau_source == TauSource::table_preset)
    {
        if (tau_sq.empty())
            throw DomainError("tau_sq must be given when tau_source is table_preset");
        for (double t : tau_sq)
            if (!(t > 0.0) || !std::isfinite(t))
                throw DomainError("tau_sq entries must be positive");
    }
}

Eigen::VectorXcd steering_vector(std::size_t element_count, int mode, std::span<const double> offsets)
{
    if (element_count < 1)
        throw DomainError("element_count must be at least 1");
    if (!offsets.empty() && offsets.size() != element_count)
        throw DomainError("steering offsets must be empty or one per element");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(element_count));
    for (std::size_t m = 1; m <= element_count; ++m)
    {
        const double eta = offsets.empty() ? 0.0 : offsets[m - 1];
        v(static_cast<Eigen::Index>(m - 1)) =
            std::polar(1.0, (element_azimuth(element_count, m) + eta) * static_cast<double>(mode));
    }
    return v;
}

Eigen::VectorXcd steering_vector(std::size_t element_count, int mode)
{
    return steering_vector(element_count, mode, {});
}

double total_power(const RsPrecoder &precoder)
{
    return precoder.private_a.squaredNorm() + precoder.private_b.squaredNorm() + precoder.common.squaredNorm();
}

RsPrecoder scale_to_power(const RsPrecoder &precoder, double budget)
{
    if (!(budget > 0.0))
        throw DomainError("power budget must be positive");
    const double power = total_power(precoder);
    if (power == 0.0)
        throw DomainError("cannot scale an all-zero precoder");
    if (power <= budget)
        return precoder;
    RsPrecoder scaled = std::sqrt(budget / power) * precoder;
    // the scaled power can land one ulp above the budget; pull it back so the projection is idempotent
    while (total_power(scaled) > budget)
        scaled = std::nextafter(1.0, 0.0) * scaled;
    return scaled;
}

double mode_isolation_defect(std::size_t element_count, std::span<const int> modes)
{
    if (element_count < 1)
        throw DomainError("element_count must be at least 1");
    if (std::set<int>(modes.begin(), modes.end()).size() != modes.size())
        throw DomainError("modes must be distinct");
    // sum_m exp(i psi_m delta) is M when delta aliases to 0 mod M and exactly 0 otherwise
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i + 1; j < modes.size(); ++j)
            if ((modes[i] - modes[j]) % static_cast<int>(element_count) == 0)
                return 1.0;
    return 0.0;
}

} // namespace oamrs
