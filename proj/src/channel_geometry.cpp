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

#include "oamrs/channel_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oamrs/errors.hpp"

namespace oamrs {

namespace {

constexpr cdouble imag_unit{0.0, 1.0};

void require_index(std::size_t count, std::size_t index, const char *what)
{
    if (index < 1 || index > count)
        throw DomainError(std::string(what) + " index " + std::to_string(index) + " outside [1, " +
                          std::to_string(count) + "]");
}

// alpha = varphi_n + eta_n - theta, the receive element's azimuth relative to the link projection
double receive_alpha(const LinkGeometry &geometry, const UcaSpec &receiver, std::size_t n)
{
    return element_azimuth(receiver.element_count, n) + receiver.phase_offsets[n - 1] - geometry.azimuth_offset;
}

} // namespace

double wrap_angle(double radians)
{
    if (!std::isfinite(radians))
        throw DomainError("angle must be finite");
    double wrapped = std::fmod(radians, two_pi);
    if (wrapped < 0.0)
        wrapped += two_pi;
    // fmod of a value just below 0 can round up to exactly 2*pi
    if (wrapped >= two_pi)
        wrapped = 0.0;
    return wrapped;
}

UcaSpec UcaSpec::uniform(std::size_t element_count, double radius, double phase_offset)
{
    UcaSpec spec;
    spec.element_count = element_count;
    spec.radius = radius;
    spec.phase_offsets.assign(element_count, wrap_angle(phase_offset));
    spec.validate();
    return spec;
}

UcaSpec UcaSpec::with_offsets(double radius, std::vector<double> phase_offsets)
{
    UcaSpec spec;
    spec.element_count = phase_offsets.size();
    spec.radius = radius;
    for (double &offset : phase_offsets)
        offset = wrap_angle(offset);
    spec.phase_offsets = std::move(phase_offsets);
    spec.validate();
    return spec;
}

void UcaSpec::validate() const
{
    if (element_count < 1)
        throw DomainError("element_count must be at least 1");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw DomainError("radius must be positive and finite");
    if (phase_offsets.size() != element_count)
        throw DomainError("phase_offsets must hold one entry per element (" + std::to_string(element_count) +
                          "), got " + std::to_string(phase_offsets.size()));
    for (double offset : phase_offsets)
        if (!std::isfinite(offset))
            throw DomainError("phase_offsets must be finite");
}

LinkGeometry LinkGeometry::make(double distance, double polar_offset, double azimuth_offset)
{
    LinkGeometry geometry{distance, polar_offset, wrap_angle(azimuth_offset)};
    geometry.validate();
    return geometry;
}

void LinkGeometry::validate() const
{
    if (!(distance > 0.0) || !std::isfinite(distance))
        throw DomainError("distance must be positive and finite");
    if (!(polar_offset >= 0.0 && polar_offset < std::numbers::pi / 2.0))
        throw DomainError("polar_offset must lie in [0, pi/2)");
    if (!(azimuth_offset >= 0.0 && azimuth_offset < two_pi))
        throw DomainError("azimuth_offset must lie in [0, 2*pi)");
}

void PropagationSpec::validate() const
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw DomainError("wavelength must be positive and finite");
    if (!(antenna_factor > 0.0) || !std::isfinite(antenna_factor))
        throw DomainError("antenna_factor must be positive and finite");
}

ChannelMatrix ChannelMatrix::from_entries(Eigen::MatrixXcd entries)
{
    if (entries.size() == 0)
        throw DomainError("channel matrix must be nonempty");
    if (!entries.allFinite())
        throw DomainError("channel matrix entries must be finite");
    ChannelMatrix channel;
    channel.entries = std::move(entries);
    return channel;
}

double element_azimuth(std::size_t element_count, std::size_t index)
{
    require_index(element_count, index, "element");
    return two_pi * static_cast<double>(index - 1) / static_cast<double>(element_count);
}

ZetaResult zeta_angle(const LinkGeometry &geometry, const UcaSpec &receiver, std::size_t n,
                      ZetaConvention convention)
{
    require_index(receiver.element_count, n, "receive element");
    const double alpha = receive_alpha(geometry, receiver, n);
    const double r = receiver.radius;
    const double s = geometry.distance * std::sin(geometry.polar_offset);

    const double radicand = r * r + s * s - 2.0 * r * s * std::cos(alpha);
    const double denominator = std::sqrt(std::max(radicand, 0.0));
    if (denominator < degenerate_denominator)
        return {0.0, true};

    const double sine = (r - s * std::cos(alpha)) / denominator;
    switch (convention)
    {
    case ZetaConvention::geometry_consistent:
        return {wrap_angle(std::atan2(sine, -s * std::sin(alpha) / denominator)), false};
    case ZetaConvention::geometry_mirrored:
        return {wrap_angle(std::atan2(sine, s * std::sin(alpha) / denominator)), false};
    case ZetaConvention::asin_branch:
    {
        const double principal = std::asin(std::clamp(sine, -1.0, 1.0));
        const double angle = (s * std::cos(alpha) >= 0.0) ? principal : std::numbers::pi - principal;
        return {wrap_angle(angle), false};
    }
    }
    return {0.0, true};
}

AmplitudePhase amplitude_and_phase_scale(const LinkGeometry &geometry, const UcaSpec &receiver,
                                         const PropagationSpec &propagation, double tx_radius, std::size_t n)
{
    require_index(receiver.element_count, n, "receive element");
    const double lambda = propagation.wavelength;
    const double d = geometry.distance;
    const double r = receiver.radius;
    const double s = d * std::sin(geometry.polar_offset);
    const double alpha = receive_alpha(geometry, receiver, n);

    const double path = std::sqrt(d * d + tx_radius * tx_radius + r * r);
    const double magnitude = propagation.antenna_factor * lambda / (4.0 * std::numbers::pi * path);
    const double phase = -two_pi * path / lambda + two_pi * r * s * std::cos(alpha) / (lambda * path);

    const double radicand = r * r + s * s - 2.0 * r * s * std::cos(alpha);
    const double projected = std::sqrt(std::max(radicand, 0.0));

    AmplitudePhase out;
    out.amplitude = std::polar(magnitude, phase);
    out.phase_scale = two_pi * tx_radius * projected / (lambda * path);
    out.zeta = zeta_angle(geometry, receiver, n, propagation.zeta_convention);
    return out;
}

cdouble channel_coefficient(const UcaSpec &tx, const UcaSpec &rx, const LinkGeometry &geometry,
                            const PropagationSpec &propagation, std::size_t m, std::size_t n)
{
    require_index(tx.element_count, m, "transmit element");
    const AmplitudePhase row = amplitude_and_phase_scale(geometry, rx, propagation, tx.radius, n);
    const double argument = element_azimuth(tx.element_count, m) + tx.phase_offsets[m - 1] -
                            element_azimuth(rx.element_count, n) - rx.phase_offsets[n - 1] + row.zeta.angle;
    return row.amplitude * std::exp(-imag_unit * row.phase_scale * std::sin(argument));
}

ChannelMatrix channel_matrix(const UcaSpec &tx, const UcaSpec &rx, const LinkGeometry &geometry,
                             const PropagationSpec &propagation)
{
    tx.validate();
    rx.validate();
    geometry.validate();
    propagation.validate();

    ChannelMatrix channel;
    channel.entries.resize(static_cast<Eigen::Index>(rx.element_count), static_cast<Eigen::Index>(tx.element_count));
    for (std::size_t n = 1; n <= rx.element_count; ++n)
    {
        const AmplitudePhase row = amplitude_and_phase_scale(geometry, rx, propagation, tx.radius, n);
        if (row.zeta.degenerate)
            ++channel.degenerate_rows;
        const double rx_angle = element_azimuth(rx.element_count, n) + rx.phase_offsets[n - 1];
        for (std::size_t m = 1; m <= tx.element_count; ++m)
        {
            const double argument =
                element_azimuth(tx.element_count, m) + tx.phase_offsets[m - 1] - rx_angle + row.zeta.angle;
            channel.entries(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(m - 1)) =
                row.amplitude * std::exp(-imag_unit * row.phase_scale * std::sin(argument));
        }
    }
    return channel;
}

ChannelMatrix oam_mode_matrix(const UcaSpec &rx, std::span<const int> modes)
{
    rx.validate();
    if (modes.empty())
        throw DomainError("mode list must be nonempty");
    ChannelMatrix channel;
    channel.entries.resize(static_cast<Eigen::Index>(rx.element_count), static_cast<Eigen::Index>(modes.size()));
    for (std::size_t n = 1; n <= rx.element_count; ++n)
    {
        const double angle = element_azimuth(rx.element_count, n) + rx.phase_offsets[n - 1];
        for (std::size_t j = 0; j < modes.size(); ++j)
            channel.entries(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(j)) =
                std::polar(1.0, angle * static_cast<double>(modes[j]));
    }
    return channel;
}

std::vector<double> gram_eigenvalues(const ChannelMatrix &channel, bool normalize)
{
    if (channel.entries.size() == 0)
        throw DomainError("channel matrix must be nonempty");

    Eigen::MatrixXcd h = channel.entries;
    if (normalize)
    {
        for (Eigen::Index i = 0; i < h.size(); ++i)
        {
            const double magnitude = std::abs(h(i));
            if (magnitude == 0.0)
                throw DomainError("cannot phase-normalize a zero channel entry");
            h(i) /= magnitude;
        }
    }

    const Eigen::MatrixXcd gram = h.adjoint() * h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("Gram eigen-decomposition did not converge");

    std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    for (double &v : values)
        v = std::max(v, 0.0);
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}

} // namespace oamrs
