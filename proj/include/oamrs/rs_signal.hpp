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
#include <vector>

#include <Eigen/Dense>

#include "oamrs/channel_geometry.hpp"

namespace oamrs {

/// The three per-pair precoders of a rate-splitting transmission.
///
/// Each array is indexed (transmit element m, receive element n): rows are the
/// M transmit elements, columns the receive elements of the intended user. The
/// common array uses the shared receive index and has max(N_a, N_b) columns.
struct RsPrecoder
{
    Eigen::MatrixXcd private_a;
    Eigen::MatrixXcd private_b;
    Eigen::MatrixXcd common;

    static RsPrecoder zeros(std::size_t tx_count, std::size_t rx_a, std::size_t rx_b);

    std::size_t tx_count() const { return static_cast<std::size_t>(private_a.rows()); }
    bool all_finite() const;
    bool is_zero() const;
};

RsPrecoder operator*(double scale, const RsPrecoder &precoder);

struct PairConfig
{
    std::size_t pair_index = 1; // k, 1-based
    int oam_mode = 1;
    UcaSpec tx;
    UcaSpec rx_a; // UD_{2k-1}
    UcaSpec rx_b; // UD_{2k}
    LinkGeometry geom_a;
    LinkGeometry geom_b;

    void validate() const;
};

enum class TauSource
{
    table_preset,
    computed_from_gram,
};

/// Which same-stream entries count as interference for entry (m, n).
/// `row_and_column`: entries with m' != m and n' != n (default).
/// `entry_only`: every entry except (m, n) itself.
enum class InterferenceExclusion
{
    row_and_column,
    entry_only,
};

struct ScenarioConfig
{
    std::vector<PairConfig> pairs;
    double noise_power = 1e-9;  // sigma^2, watts
    double power_budget = 1.0;  // P_T per transmit UCA, watts
    PropagationSpec propagation;
    TauSource tau_source = TauSource::table_preset;
    std::vector<double> tau_sq;
    InterferenceExclusion exclusion = InterferenceExclusion::row_and_column;

    void validate() const;
};

// exp(i (psi_m + eta_m) l) for m = 1..M.
Eigen::VectorXcd steering_vector(std::size_t element_count, int mode, std::span<const double> offsets);
Eigen::VectorXcd steering_vector(std::size_t element_count, int mode);

// Sum of squared magnitudes over all three arrays.
double total_power(const RsPrecoder &precoder);

// Scales by min(1, sqrt(budget / total_power)). Throws DomainError on an all-zero precoder.
RsPrecoder scale_to_power(const RsPrecoder &precoder, double budget);

/// Largest normalized steering overlap |sum_m exp(i psi_m (l - l'))| / M over
/// distinct mode pairs; 0 when no two modes alias modulo M.
double mode_isolation_defect(std::size_t element_count, std::span<const int> modes);

} // namespace oamrs
