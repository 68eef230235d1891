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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oamrs/channel_geometry.hpp"
#include "oamrs/errors.hpp"

using namespace oamrs;
using std::numbers::pi;

namespace {

// d sin(phi) = 1 with d = 2, phi = pi/6; receive element 2 of 4 sits at varphi = pi/2
LinkGeometry unit_projection()
{
    return LinkGeometry::make(2.0, pi / 6.0);
}

} // namespace

TEST_CASE("element azimuth")
{
    CHECK(element_azimuth(4, 1) == 0.0);
    CHECK(element_azimuth(4, 3) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(element_azimuth(3, 2) == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(element_azimuth(4, 0), DomainError);
    CHECK_THROWS_AS(element_azimuth(4, 5), DomainError);
}

TEST_CASE("angles wrap into [0, 2pi)")
{
    CHECK(wrap_angle(-pi / 2.0) == doctest::Approx(1.5 * pi));
    CHECK(wrap_angle(two_pi) == 0.0);
    CHECK(wrap_angle(-1e-300) < two_pi);
    CHECK_THROWS_AS(wrap_angle(NAN), DomainError);
    const UcaSpec u = UcaSpec::uniform(3, 1.0, -pi);
    for (double eta : u.phase_offsets)
        CHECK(eta == doctest::Approx(pi));
}

TEST_CASE("type invariants are enforced")
{
    CHECK_THROWS_AS(UcaSpec::uniform(0, 1.0), DomainError);
    CHECK_THROWS_AS(UcaSpec::uniform(3, 0.0), DomainError);
    CHECK_THROWS_AS(UcaSpec::uniform(3, -1.0), DomainError);
    UcaSpec bad = UcaSpec::uniform(3, 1.0);
    bad.phase_offsets.pop_back();
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(LinkGeometry::make(0.0), DomainError);
    CHECK_THROWS_AS(LinkGeometry::make(1.0, pi / 2.0), DomainError);
    LinkGeometry raw;
    raw.azimuth_offset = two_pi;
    CHECK_THROWS_AS(raw.validate(), DomainError);
    CHECK(LinkGeometry::make(1.0, 0.0, two_pi).azimuth_offset == 0.0);
    PropagationSpec p;
    p.wavelength = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("zeta angle")
{
    SUBCASE("aligned arrays give pi/2 for every element")
    {
        const UcaSpec rx = UcaSpec::uniform(4, 0.03);
        for (std::size_t n = 1; n <= 4; ++n)
        {
            const ZetaResult z = zeta_angle(LinkGeometry::make(10.0), rx, n);
            CHECK_FALSE(z.degenerate);
            CHECK(z.angle == doctest::Approx(pi / 2.0).epsilon(1e-14));
        }
    }
    SUBCASE("r = 1, d sin(phi) = 1, alpha = pi/2")
    {
        const UcaSpec rx = UcaSpec::uniform(4, 1.0);
        const ZetaResult z = zeta_angle(unit_projection(), rx, 2);
        CHECK_FALSE(z.degenerate);
        CHECK(std::sin(z.angle) == doctest::Approx(0.7071067811865475244).epsilon(1e-13));
        CHECK(z.angle == doctest::Approx(2.3561944901923449288).epsilon(1e-13));
        const ZetaResult mirrored = zeta_angle(unit_projection(), rx, 2, ZetaConvention::geometry_mirrored);
        CHECK(mirrored.angle == doctest::Approx(pi / 4.0).epsilon(1e-13));
    }
    SUBCASE("degenerate geometry")
    {
        const UcaSpec rx = UcaSpec::uniform(4, 1.0);
        const ZetaResult z = zeta_angle(unit_projection(), rx, 1);
        CHECK(z.degenerate);
        CHECK(z.angle == 0.0);
        const ChannelMatrix h = channel_matrix(UcaSpec::uniform(3, 0.5), rx, unit_projection(), PropagationSpec{});
        CHECK(h.degenerate_rows == 1);
        CHECK(h.entries.allFinite());
    }
    SUBCASE("arcsine branch keeps the sine")
    {
        const UcaSpec rx = UcaSpec::uniform(8, 0.7);
        const LinkGeometry g = LinkGeometry::make(3.0, 0.4, 1.0);
        for (std::size_t n = 1; n <= 8; ++n)
        {
            const double a = zeta_angle(g, rx, n, ZetaConvention::asin_branch).angle;
            const double b = zeta_angle(g, rx, n, ZetaConvention::geometry_consistent).angle;
            CHECK(std::sin(a) == doctest::Approx(std::sin(b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sin^2 + cos^2 = 1 for the consistent convention")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial)
    {
        const UcaSpec rx = UcaSpec::uniform(5, 0.01 + u(rng), two_pi * u(rng));
        const LinkGeometry g = LinkGeometry::make(0.5 + 20.0 * u(rng), 1.5 * u(rng), two_pi * u(rng) * 0.999);
        const double r = rx.radius;
        const double s = g.distance * std::sin(g.polar_offset);
        for (std::size_t n = 1; n <= 5; ++n)
        {
            const ZetaResult z = zeta_angle(g, rx, n);
            if (z.degenerate)
                continue;
            const double alpha = element_azimuth(5, n) + rx.phase_offsets[n - 1] - g.azimuth_offset;
            const double den = std::sqrt(r * r + s * s - 2.0 * r * s * std::cos(alpha));
            const double sine = (r - s * std::cos(alpha)) / den;
            const double cosine = -s * std::sin(alpha) / den;
            CHECK(sine * sine + cosine * cosine == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::sin(z.angle) == doctest::Approx(sine).epsilon(1e-12));
        }
    }
}

TEST_CASE("amplitude and phase scale")
{
    const PropagationSpec prop; // beta = 4 pi, lambda = 0.01
    SUBCASE("magnitude of A")
    {
        const AmplitudePhase ap = amplitude_and_phase_scale(LinkGeometry::make(10.0), UcaSpec::uniform(4, 0.04), prop,
                                                            0.03, 1);
        CHECK(std::abs(ap.amplitude) == doctest::Approx(0.00099998750023437011729).epsilon(1e-13));
    }
    SUBCASE("aligned: B = 2 pi R r / (lambda D0) for every element")
    {
        const double R = 0.03, r = 0.04, d = 10.0;
        const double expected = two_pi * R * r / (0.01 * std::sqrt(d * d + R * R + r * r));
        for (std::size_t n = 1; n <= 4; ++n)
            CHECK(amplitude_and_phase_scale(LinkGeometry::make(d), UcaSpec::uniform(4, r), prop, R, n).phase_scale ==
                  doctest::Approx(expected).epsilon(1e-13));
    }
    SUBCASE("r = 0 collapses B and the second phase term")
    {
        UcaSpec rx = UcaSpec::uniform(4, 1.0);
        rx.radius = 0.0;
        const double R = 0.05, d = 5.0, phi = 0.3;
        const AmplitudePhase ap = amplitude_and_phase_scale(LinkGeometry::make(d, phi), rx, prop, R, 3);
        const double path = std::sqrt(d * d + R * R);
        CHECK(ap.phase_scale == doctest::Approx(two_pi * R * d * std::sin(phi) / (0.01 * path)).epsilon(1e-13));
        const double first_phase_only = wrap_angle(-two_pi * path / 0.01);
        CHECK(wrap_angle(std::arg(ap.amplitude)) == doctest::Approx(first_phase_only).epsilon(1e-9));
    }
}

TEST_CASE("channel coefficients")
{
    const PropagationSpec prop;
    const UcaSpec tx = UcaSpec::uniform(3, 0.01);
    const UcaSpec rx = UcaSpec::uniform(4, 0.02);

    SUBCASE("aligned magnitude is beta lambda / (4 pi D0)")
    {
        const double expected = 1.0 / (100.0 * std::sqrt(100.0 + 0.0001 + 0.0004));
        for (std::size_t n = 1; n <= 4; ++n)
            for (std::size_t m = 1; m <= 3; ++m)
                CHECK(std::abs(channel_coefficient(tx, rx, LinkGeometry::make(10.0), prop, m, n)) ==
                      doctest::Approx(expected).epsilon(1e-13));
    }
    SUBCASE("zero transmit radius gives h = A")
    {
        UcaSpec point = tx;
        point.radius = 0.0;
        const LinkGeometry g = LinkGeometry::make(4.0, 0.2, 0.7);
        const cdouble a = amplitude_and_phase_scale(g, rx, prop, 0.0, 2).amplitude;
        for (std::size_t m = 1; m <= 3; ++m)
            CHECK(std::abs(channel_coefficient(point, rx, g, prop, m, 2) - a) < 1e-18);
    }
    SUBCASE("matrix agrees with single coefficients")
    {
        const LinkGeometry g = LinkGeometry::make(7.0, 0.3, 2.0);
        const ChannelMatrix h = channel_matrix(tx, rx, g, prop);
        CHECK(h.rx_count() == 4);
        CHECK(h.tx_count() == 3);
        for (std::size_t n = 1; n <= 4; ++n)
            for (std::size_t m = 1; m <= 3; ++m)
                CHECK(std::abs(h.entries(n - 1, m - 1) - channel_coefficient(tx, rx, g, prop, m, n)) < 1e-18);
    }
    SUBCASE("1 x 1")
    {
        const UcaSpec one = UcaSpec::uniform(1, 0.02);
        const ChannelMatrix h = channel_matrix(one, one, LinkGeometry::make(3.0), prop);
        CHECK(h.entries.rows() == 1);
        CHECK(h.entries(0, 0) == channel_coefficient(one, one, LinkGeometry::make(3.0), prop, 1, 1));
    }
    SUBCASE("index errors")
    {
        CHECK_THROWS_AS(channel_coefficient(tx, rx, LinkGeometry::make(1.0), prop, 4, 1), DomainError);
        CHECK_THROWS_AS(channel_coefficient(tx, rx, LinkGeometry::make(1.0), prop, 1, 5), DomainError);
    }
}

TEST_CASE("row-magnitude law and continuity on random geometries")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const PropagationSpec prop;
    for (int trial = 0; trial < 200; ++trial)
    {
        const UcaSpec tx = UcaSpec::uniform(1 + trial % 5, 0.005 + 0.05 * u(rng), two_pi * u(rng));
        const UcaSpec rx = UcaSpec::uniform(1 + trial % 6, 0.005 + 0.05 * u(rng), two_pi * u(rng));
        const LinkGeometry g = LinkGeometry::make(1.0 + 30.0 * u(rng), 1.2 * u(rng), two_pi * u(rng) * 0.999);
        const ChannelMatrix h = channel_matrix(tx, rx, g, prop);
        LinkGeometry moved = g;
        moved.distance += 1e-9;
        const ChannelMatrix h2 = channel_matrix(tx, rx, moved, prop);
        for (std::size_t n = 1; n <= rx.element_count; ++n)
        {
            const double a = std::abs(amplitude_and_phase_scale(g, rx, prop, tx.radius, n).amplitude);
            for (std::size_t m = 1; m <= tx.element_count; ++m)
            {
                CHECK(std::abs(std::abs(h.entries(n - 1, m - 1)) - a) < 1e-12);
                CHECK(std::abs(h2.entries(n - 1, m - 1) - h.entries(n - 1, m - 1)) < 1e-6);
            }
        }
    }
}

TEST_CASE("aligned square arrays give circulant channels")
{
    const PropagationSpec prop;
    for (std::size_t size : {2U, 3U, 4U, 6U})
    {
        const UcaSpec tx = UcaSpec::uniform(size, 0.02, 0.4);
        const UcaSpec rx = UcaSpec::uniform(size, 0.03, 0.4);
        const ChannelMatrix h = channel_matrix(tx, rx, LinkGeometry::make(8.0), prop);
        for (std::size_t n = 0; n < size; ++n)
            for (std::size_t m = 0; m < size; ++m)
            {
                const std::size_t shift = (m + size - n) % size;
                CHECK(std::abs(h.entries(n, m) - h.entries(0, shift)) < 1e-12);
            }
    }
}

TEST_CASE("swapping receive basic angles permutes rows")
{
    const PropagationSpec prop;
    const UcaSpec tx = UcaSpec::uniform(3, 0.02);
    const LinkGeometry g = LinkGeometry::make(6.0, 0.25, 0.5);
    // element 1 and 3 swapped: give each the other's angle through its offset
    const double step = two_pi / 4.0;
    const UcaSpec rx = UcaSpec::with_offsets(0.03, {0.0, 0.0, 0.0, 0.0});
    const UcaSpec swapped = UcaSpec::with_offsets(0.03, {2.0 * step, 0.0, -2.0 * step, 0.0});
    const ChannelMatrix h = channel_matrix(tx, rx, g, prop);
    const ChannelMatrix s = channel_matrix(tx, swapped, g, prop);
    CHECK((s.entries.row(0) - h.entries.row(2)).norm() < 1e-12);
    CHECK((s.entries.row(2) - h.entries.row(0)).norm() < 1e-12);
    CHECK((s.entries.row(1) - h.entries.row(1)).norm() < 1e-15);
}

TEST_CASE("Gram eigenvalues")
{
    SUBCASE("orthogonal mode columns")
    {
        const std::vector<int> two{1, 2};
        const std::vector<int> three{1, 2, 3};
        const auto e42 = gram_eigenvalues(oam_mode_matrix(UcaSpec::uniform(4, 1.0), two));
        REQUIRE(e42.size() == 2);
        CHECK(e42[0] == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(e42[1] == doctest::Approx(4.0).epsilon(1e-12));
        const auto e53 = gram_eigenvalues(oam_mode_matrix(UcaSpec::uniform(5, 1.0), three));
        REQUIRE(e53.size() == 3);
        for (double v : e53)
            CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("single column")
    {
        Eigen::MatrixXcd h(3, 1);
        h << cdouble(0.5, 0.0), cdouble(0.0, 2.0), cdouble(-1.0, 1.0);
        CHECK(gram_eigenvalues(ChannelMatrix::from_entries(h))[0] == doctest::Approx(3.0));
        CHECK(gram_eigenvalues(ChannelMatrix::from_entries(h), false)[0] == doctest::Approx(0.25 + 4.0 + 2.0));
    }
    SUBCASE("zero entry cannot be normalized")
    {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Ones(2, 2);
        h(1, 0) = 0.0;
        CHECK_THROWS_AS(gram_eigenvalues(ChannelMatrix::from_entries(h)), DomainError);
        CHECK_NOTHROW(gram_eigenvalues(ChannelMatrix::from_entries(h), false));
    }
    SUBCASE("spectrum is nonnegative, descending and sums to the Frobenius norm")
    {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> z;
        for (int trial = 0; trial < 100; ++trial)
        {
            const Eigen::Index n = 1 + trial % 6, m = 1 + (trial / 6) % 5;
            Eigen::MatrixXcd h(n, m);
            for (Eigen::Index i = 0; i < h.size(); ++i)
                h(i) = {z(rng), z(rng)};
            const ChannelMatrix ch = ChannelMatrix::from_entries(h);
            for (bool normalize : {false, true})
            {
                const auto values = gram_eigenvalues(ch, normalize);
                CHECK(values.size() == static_cast<std::size_t>(m));
                double sum = 0.0;
                for (std::size_t i = 0; i < values.size(); ++i)
                {
                    CHECK(values[i] >= 0.0);
                    if (i > 0)
                        CHECK(values[i] <= values[i - 1]);
                    sum += values[i];
                }
                const double frob = normalize ? static_cast<double>(h.size()) : h.squaredNorm();
                CHECK(sum == doctest::Approx(frob).epsilon(1e-9));
            }
        }
    }
}
