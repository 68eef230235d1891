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

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oamrs {

using cdouble = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Maps any finite angle into [0, 2*pi).
double wrap_angle(double radians);

/// Uniform circular array: element count, radius and one rotation offset per element.
///
/// Offsets are stored per element so that both an array-wide rotation and
/// element-specific placement errors can be represented. Use `uniform` for the
/// common case; it wraps the offset into [0, 2*pi).
struct UcaSpec
{
    std::size_t element_count = 1;
    double radius = 1.0;              // meters
    std::vector<double> phase_offsets; // radians, size == element_count

    static UcaSpec uniform(std::size_t element_count, double radius, double phase_offset = 0.0);
    static UcaSpec with_offsets(double radius, std::vector<double> phase_offsets);

    void validate() const;
};

/// Placement of a receive array relative to the transmit array axis.
struct LinkGeometry
{
    double distance = 10.0;       // center-to-center, meters
    double polar_offset = 0.0;    // angle from the transmit z-axis, [0, pi/2)
    double azimuth_offset = 0.0;  // projection angle from the x-axis, [0, 2*pi)

    static LinkGeometry make(double distance, double polar_offset = 0.0, double azimuth_offset = 0.0);
    void validate() const;
};

/// How the misalignment angle zeta is resolved from its sine/cosine pair.
///
/// `geometry_consistent` takes the cosine from the projected element position,
/// cos(zeta) = -d sin(phi) sin(alpha) / D, so that sin^2 + cos^2 = 1.
/// `geometry_mirrored` is the same with the opposite cosine sign.
/// `asin_branch` takes arcsin of the sine expression and picks the quadrant
/// from the sign of d sin(phi) cos(alpha), which is how the closed form reads
/// when both numerators use cos(alpha).
enum class ZetaConvention
{
    asin_branch,
    geometry_consistent,
    geometry_mirrored,
};

struct PropagationSpec
{
    double wavelength = 0.01;                     // meters
    double antenna_factor = 4.0 * std::numbers::pi; // beta
    ZetaConvention zeta_convention = ZetaConvention::geometry_consistent;

    void validate() const;
};

/// Dense N x M channel between one transmit UCA and one receive UCA.
/// Entry (n, m) holds the coefficient from transmit element m to receive element n.
struct ChannelMatrix
{
    Eigen::MatrixXcd entries;
    std::size_t degenerate_rows = 0; // rows whose zeta fell back to 0

    std::size_t rx_count() const { return static_cast<std::size_t>(entries.rows()); }
    std::size_t tx_count() const { return static_cast<std::size_t>(entries.cols()); }

    static ChannelMatrix from_entries(Eigen::MatrixXcd entries);
};

struct ZetaResult
{
    double angle = 0.0;
    bool degenerate = false;
};

struct AmplitudePhase
{
    cdouble amplitude; // A
    double phase_scale = 0.0; // B >= 0
    ZetaResult zeta;
};

inline constexpr double degenerate_denominator = 1e-12;

// Basic angle of a UCA element, 2*pi*(index-1)/element_count. `index` is 1-based.
double element_azimuth(std::size_t element_count, std::size_t index);

// Misalignment angle for receive element `n` (1-based).
ZetaResult zeta_angle(const LinkGeometry &geometry, const UcaSpec &receiver, std::size_t n,
                      ZetaConvention convention = ZetaConvention::geometry_consistent);

// Row factors A and B for receive element `n` (1-based); `tx_radius` is R.
AmplitudePhase amplitude_and_phase_scale(const LinkGeometry &geometry, const UcaSpec &receiver,
                                         const PropagationSpec &propagation, double tx_radius, std::size_t n);

// h for transmit element `m` and receive element `n` (both 1-based).
cdouble channel_coefficient(const UcaSpec &tx, const UcaSpec &rx, const LinkGeometry &geometry,
                            const PropagationSpec &propagation, std::size_t m, std::size_t n);

ChannelMatrix channel_matrix(const UcaSpec &tx, const UcaSpec &rx, const LinkGeometry &geometry,
                             const PropagationSpec &propagation);

/// Ideal mode channel: column j is the receive-array phase profile of `modes[j]`,
/// entry (n, j) = exp(i * l_j * (varphi_n + eta_n)). Distinct modes that are not
/// congruent modulo N give mutually orthogonal columns.
ChannelMatrix oam_mode_matrix(const UcaSpec &rx, std::span<const int> modes);

/// Eigenvalues of H^H H in descending order (M values).
///
/// With `normalize` each entry is replaced by its unit phasor first; a zero entry
/// then has no phase and raises DomainError. Tiny negative round-off is clamped to 0.
std::vector<double> gram_eigenvalues(const ChannelMatrix &channel, bool normalize = true);

} // namespace oamrs
