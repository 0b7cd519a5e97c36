// SPDX-License-Identifier: Apache-2.0
//
// isacsim - coupled ISAC channel simulation and analysis
// Copyright (C) 2026 The isacsim Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "isac/diffraction.hpp"
#include "isac/error.hpp"

using namespace isac;

namespace
{
    constexpr double inf = std::numeric_limits<double>::infinity();

    LinkGeometry straight_link(double length)
    {
        LinkGeometry l;
        l.l1_pos_m = {0.0, 0.0, 1.0};
        l.l2_pos_m = {0.0, length, 1.0};
        return l;
    }

    ScreenGeometry half_plane(double y, double depth)
    {
        ScreenGeometry s;
        s.center_m = {0.0, y, 1.0};
        s.h1_m = depth;
        s.h2_m = inf;
        s.w1_m = s.w2_m = inf;
        return s;
    }

    LinkGeometry point1_link()
    {
        LinkGeometry l;
        l.l1_pos_m = {0.0, 0.0, 1.4};
        l.l2_pos_m = {0.0, 24.0, 1.4};
        return l;
    }

    ScreenGeometry point1_screen()
    {
        ScreenGeometry s;
        s.center_m = {0.0, 4.0, 1.4};
        s.w1_m = s.w2_m = 0.35;
        s.h1_m = 0.2;
        s.h2_m = 1.4;
        return s;
    }

    // Horn at L1 steered along the swept ray, omni at L2 facing back.
    double point1_sweep(double aod_deg)
    {
        const double lambda = speed_of_light / 105e9;
        const Vec3 tx{0.0, 0.0, 1.4};
        const auto t = equivalent_translation(tx, aod_deg, 90.0, 24.0, point1_screen(), lambda);
        const auto back = direction_angles(t.link.l1_pos_m - t.link.l2_pos_m);
        const auto gains = edge_gains(t.link, t.screen, steer(AntennaConfig::horn_105ghz(tx), aod_deg, 90.0),
                                      steer(AntennaConfig::omni_105ghz(t.link.l2_pos_m), back[0], back[1]));
        return fourkedg_attenuation(t.link, t.screen, gains);
    }
}

TEST_CASE("knife-edge factor limits")
{
    const double lambda = speed_of_light / 105e9;
    EdgeClearance e{5.0, 7.0, 5.0, 7.0, 1};
    CHECK(ked_edge_factor(e, lambda) == 0.0);
    e.r = e.s = inf;
    CHECK(ked_edge_factor(e, lambda) == 0.5);
    e.sign = -1;
    CHECK(ked_edge_factor(e, lambda) == -0.5);

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> c(0.0, 3.0);
    for (int i = 0; i < 200; ++i)
    {
        const double off = c(gen);
        EdgeClearance k{std::hypot(5.0, off), std::hypot(7.0, off), 5.0, 7.0, i % 2 ? 1 : -1};
        const double f = ked_edge_factor(k, lambda);
        CHECK(f > -0.5);
        CHECK(f < 0.5);
    }

    EdgeClearance bad{1.0, 1.0, 0.0, 1.0, 1};
    CHECK_THROWS_AS(ked_edge_factor(bad, lambda), GeometryError);
}

TEST_CASE("half-plane through the ray loses 6.02 dB")
{
    const auto link = straight_link(10.0);
    const auto screen = half_plane(4.0, 0.0);
    const double expected = -20.0 * std::log10(0.5);
    CHECK(fourked_attenuation(link, screen) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(fourkedg_attenuation(link, screen, EdgeGainSet::unit()) == doctest::Approx(expected).epsilon(1e-12));
    const auto field = fresnel_kirchhoff_field(link, screen);
    CHECK(std::abs(field.attenuation_db() - expected) < 0.02);
}

TEST_CASE("empty screen is transparent")
{
    const auto link = straight_link(10.0);
    ScreenGeometry s;
    s.center_m = {0.0, 3.0, 1.0};
    CHECK(fourked_attenuation(link, s) == 0.0);
    CHECK(std::abs(fresnel_kirchhoff_field(link, s).attenuation_db()) < 0.01);
}

TEST_CASE("single-edge shadow depth is monotone")
{
    const auto link = straight_link(20.0);
    double prev = 0.0;
    for (double d = 0.0; d <= 1.0; d += 0.01)
    {
        const double a = fourked_attenuation(link, half_plane(5.0, d));
        CHECK(a >= prev);
        prev = a;
    }
    CHECK(prev > 20.0);
}

TEST_CASE("unit gains reduce to the plain model")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ext(0.0, 1.0), off(-0.5, 0.5), pos(1.0, 19.0);
    const auto link = straight_link(20.0);
    for (int i = 0; i < 200; ++i)
    {
        ScreenGeometry s;
        s.center_m = {off(gen), pos(gen), 1.0 + off(gen)};
        s.w1_m = ext(gen);
        s.w2_m = ext(gen);
        s.h1_m = ext(gen);
        s.h2_m = ext(gen);
        const double a = fourked_attenuation(link, s);
        const double g = fourkedg_attenuation(link, s, EdgeGainSet::unit());
        if (std::isinf(a))
            CHECK(std::isinf(g));
        else
            CHECK(std::abs(a - g) <= 1e-12);
        CHECK(a >= 0.0);
    }
}

TEST_CASE("gain edge cases")
{
    const auto link = point1_link();
    const auto screen = point1_screen();
    EdgeGainSet zero;
    zero.g_r.fill(0.0);
    zero.g_s.fill(0.0);
    CHECK(std::isinf(fourkedg_attenuation(link, screen, zero)));
    EdgeGainSet neg;
    neg.g_s[EdgeW2] = -0.1;
    CHECK_THROWS_AS(fourkedg_attenuation(link, screen, neg), ConfigError);
    CHECK(capped_db(inf) == attenuation_cap_db);
}

TEST_CASE("screens outside the link are rejected")
{
    const auto link = straight_link(10.0);
    ScreenGeometry s = half_plane(-1.0, 0.1);
    CHECK_THROWS_AS(fourked_attenuation(link, s), GeometryError);
    s.center_m = {0.0, 12.0, 1.0};
    CHECK_THROWS_AS(fresnel_kirchhoff_field(link, s), GeometryError);
    LinkGeometry same;
    CHECK_THROWS_AS(same.validate(), GeometryError);
}

TEST_CASE("swapping the link nodes keeps the attenuation")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ext(0.0, 0.8), off(-0.3, 0.3), pos(2.0, 18.0);
    const auto link = straight_link(20.0);
    LinkGeometry rev = link;
    std::swap(rev.l1_pos_m, rev.l2_pos_m);
    for (int i = 0; i < 100; ++i)
    {
        ScreenGeometry s;
        s.center_m = {off(gen), pos(gen), 1.0 + off(gen)};
        s.w1_m = ext(gen);
        s.w2_m = ext(gen);
        s.h1_m = ext(gen);
        s.h2_m = ext(gen);
        // same physical screen seen from the other side: left and right exchange
        ScreenGeometry m = s;
        std::swap(m.w1_m, m.w2_m);
        const double a = fourked_attenuation(link, s);
        const double b = fourked_attenuation(rev, m);
        if (std::isinf(a))
            CHECK(std::isinf(b));
        else
            CHECK(a == doctest::Approx(b).epsilon(1e-9));

        EdgeGainSet g;
        for (std::size_t e = 0; e < 4; ++e)
        {
            g.g_r[e] = 0.2 + 0.1 * static_cast<double>(e);
            g.g_s[e] = 0.9 - 0.15 * static_cast<double>(e);
        }
        EdgeGainSet gr;
        gr.g_r = g.g_s;
        gr.g_s = g.g_r;
        std::swap(gr.g_r[EdgeW1], gr.g_r[EdgeW2]);
        std::swap(gr.g_s[EdgeW1], gr.g_s[EdgeW2]);
        const double ag = fourkedg_attenuation(link, s, g);
        const double bg = fourkedg_attenuation(rev, m, gr);
        if (std::isinf(ag))
            CHECK(std::isinf(bg));
        else
            CHECK(ag == doctest::Approx(bg).epsilon(1e-9));
    }
}

TEST_CASE("scaling distances with the Fresnel zone keeps the attenuation")
{
    const auto link = point1_link();
    const auto screen = point1_screen();
    LinkGeometry big = link;
    big.l2_pos_m = {0.0, 48.0, 1.4};
    ScreenGeometry scaled = screen;
    scaled.center_m = {0.0, 8.0, 1.4};
    const double k = std::sqrt(2.0);
    scaled.w1_m *= k;
    scaled.w2_m *= k;
    scaled.h1_m *= k;
    scaled.h2_m *= k;
    CHECK(std::abs(fourked_attenuation(link, screen) - fourked_attenuation(big, scaled)) < 0.1);
}

TEST_CASE("numerical integral on the reference screen")
{
    const auto f = fresnel_kirchhoff_field(point1_link(), point1_screen());
    CHECK(std::abs(f.attenuation_db() - 20.0) <= 3.0);
    CHECK(std::abs(f.u0) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("gain-weighted sweep shape on the reference screen")
{
    CHECK(point1_sweep(90.0) >= 15.0);
    for (double aod = 70.0; aod <= 110.0 + 1e-9; aod += 1.0)
        if (aod < 75.0 - 1e-9 || aod > 105.0 + 1e-9)
            CHECK(point1_sweep(aod) <= 3.0);
    for (double aod = 80.0; aod < 90.0 - 1e-9; aod += 0.5)
    {
        CHECK(point1_sweep(aod + 0.5) >= point1_sweep(aod));
        CHECK(point1_sweep(180.0 - aod - 0.5) >= point1_sweep(180.0 - aod));
    }
    CHECK(point1_sweep(85.0) == doctest::Approx(point1_sweep(95.0)).epsilon(1e-9));
}
