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
#include <random>

#include "isac/error.hpp"
#include "isac/target.hpp"

using namespace isac;

namespace
{
    RcsTable ramp_table()
    {
        // sigma = 1 + theta_in/10 + phi_in/100 + theta_out/1000 + phi_out/10000
        std::vector<RcsSample> s;
        for (double ti : {80.0, 90.0, 100.0})
            for (double pi_ : {0.0, 90.0, 180.0, 270.0})
                for (double to : {80.0, 100.0})
                    for (double po : {0.0, 120.0, 240.0})
                        s.push_back({ti, pi_, to, po, 1.0 + ti / 10.0 + pi_ / 100.0 + to / 1000.0 + po / 10000.0});
        return RcsTable::from_samples(s, RcsInterpolation::Bilinear, 0.5);
    }

    HalfLink leg(int n, double base_delay, double doppler, std::mt19937_64 &gen)
    {
        std::uniform_real_distribution<double> u(0.1, 1.0), az(0.0, 300.0), zen(80.0, 100.0);
        HalfLink h;
        for (int i = 0; i < n; ++i)
        {
            PathComponent p;
            p.cluster_index = 1;
            p.path_index = i + 1;
            p.amplitude = std::polar(u(gen), 6.0 * u(gen));
            p.delay_s = base_delay * (1.0 + i);
            p.doppler_hz = doppler * (i + 1);
            p.aod_deg = az(gen);
            p.zod_deg = zen(gen);
            p.aoa_deg = az(gen);
            p.zoa_deg = zen(gen);
            h.paths.push_back(p);
        }
        return h;
    }
}

TEST_CASE("RCS table lookups")
{
    const auto iso = RcsTable::isotropic(1.0);
    CHECK(rcs_lookup(iso, {10.0, 20.0}, {170.0, 300.0}) == 1.0);
    CHECK(iso.is_isotropic());
    CHECK_THROWS_AS(RcsTable::isotropic(-1.0), ConfigError);

    const auto t = ramp_table();
    CHECK(t.lookup(90.0, 180.0, 100.0, 240.0) == 1.0 + 9.0 + 1.8 + 0.1 + 0.024);
    // a multilinear function is reproduced exactly inside the grid
    CHECK(t.lookup(85.0, 45.0, 90.0, 60.0) ==
          doctest::Approx(1.0 + 8.5 + 0.45 + 0.09 + 0.006).epsilon(1e-12));
    CHECK(t.lookup(120.0, 45.0, 90.0, 60.0) == 0.5);
    CHECK(t.scaled(3.0).lookup(85.0, 45.0, 90.0, 60.0) ==
          doctest::Approx(3.0 * t.lookup(85.0, 45.0, 90.0, 60.0)).epsilon(1e-12));

    const std::vector<RcsSample> cell{
        {80.0, 0.0, 90.0, 0.0, 1.0}, {80.0, 10.0, 90.0, 0.0, 1.0},
        {100.0, 0.0, 90.0, 0.0, 3.0}, {100.0, 10.0, 90.0, 0.0, 3.0}};
    const auto c = RcsTable::from_samples(cell);
    CHECK(c.lookup(90.0, 5.0, 90.0, 0.0) == 2.0);
    // single-valued axes cover every query
    CHECK(c.lookup(90.0, 5.0, 30.0, 200.0) == 2.0);
    const auto near = RcsTable::from_samples(cell, RcsInterpolation::Nearest);
    CHECK(near.lookup(95.0, 5.0, 90.0, 0.0) == 3.0);

    auto holey = cell;
    holey.pop_back();
    CHECK_THROWS_AS(RcsTable::from_samples(holey), DataError);
    auto dup = cell;
    dup.push_back(cell[0]);
    CHECK_THROWS(RcsTable::from_samples(dup));
}

TEST_CASE("unit composition adds delays")
{
    HalfLink a, b;
    PathComponent p;
    p.amplitude = {1.0, 0.0};
    p.delay_s = 13.3e-9;
    a.paths = {p};
    p.delay_s = 66.7e-9;
    b.paths = {p};
    const auto r = concatenate_links(a, b, RcsTable::isotropic(1.0), 1);
    REQUIRE(r.paths.size() == 1);
    CHECK(r.paths[0].delay_s == doctest::Approx(80e-9).epsilon(1e-15));
    CHECK(std::abs(r.paths[0].amplitude) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.paths[0].origin == Origin::TargetNonCoupled);
    CHECK(r.kind == ChannelKind::TargetNonCoupled);
    CHECK(r.state == ChannelState::WithTarget);

    CHECK(concatenate_links(a, b, RcsTable::isotropic(0.0), 1).paths.empty());
}

TEST_CASE("product against a brute-force double loop")
{
    std::mt19937_64 gen(8);
    const auto a = leg(3, 10e-9, 12.5, gen);
    const auto b = leg(4, 20e-9, -3.0, gen);
    const auto table = ramp_table();
    const auto r = concatenate_links(a, b, table, 99);
    REQUIRE(r.paths.size() == 12);
    std::size_t k = 0;
    for (const auto &x : a.paths)
        for (const auto &y : b.paths)
        {
            const auto &p = r.paths[k++];
            const double sigma = rcs_lookup(table, {x.zoa_deg, x.aoa_deg}, {y.zod_deg, y.aod_deg});
            CHECK(p.power() == doctest::Approx(x.power() * y.power() * sigma).epsilon(1e-12));
            CHECK(p.delay_s == x.delay_s + y.delay_s);
            CHECK(p.doppler_hz == x.doppler_hz + y.doppler_hz);
            CHECK(p.aod_deg == x.aod_deg);
            CHECK(p.zod_deg == x.zod_deg);
            CHECK(p.aoa_deg == y.aoa_deg);
            CHECK(p.zoa_deg == y.zoa_deg);
            CHECK(p.path_index == static_cast<int>(k));
            CHECK(p.cluster_index == a.st_id);
        }
    CHECK(concatenate_links(a, b, table, 99) == r);
    const auto other = concatenate_links(a, b, table, 100);
    CHECK_FALSE(other.paths[0].initial_phase_rad == r.paths[0].initial_phase_rad);
}

TEST_CASE("scaling the RCS scales every power")
{
    std::mt19937_64 gen(9);
    const auto a = leg(3, 10e-9, 0.0, gen);
    const auto b = leg(2, 20e-9, 0.0, gen);
    const auto base = concatenate_links(a, b, ramp_table(), 5);
    const auto big = concatenate_links(a, b, ramp_table().scaled(7.0), 5);
    REQUIRE(base.paths.size() == big.paths.size());
    for (std::size_t i = 0; i < base.paths.size(); ++i)
    {
        CHECK(big.paths[i].power() == doctest::Approx(7.0 * base.paths[i].power()).epsilon(1e-12));
        CHECK(big.paths[i].delay_s == base.paths[i].delay_s);
        CHECK(big.paths[i].aod_deg == base.paths[i].aod_deg);
        CHECK(big.paths[i].aoa_deg == base.paths[i].aoa_deg);
    }
}

TEST_CASE("top-k pruning keeps the strongest paths")
{
    std::mt19937_64 gen(10);
    const auto a = leg(4, 10e-9, 0.0, gen);
    const auto b = leg(4, 20e-9, 0.0, gen);
    const auto all = concatenate_links(a, b, RcsTable::isotropic(1.0), 3);
    const auto top = concatenate_links(a, b, RcsTable::isotropic(1.0), 3, 5);
    REQUIRE(top.paths.size() == 5);
    std::vector<double> powers;
    for (const auto &p : all.paths)
        powers.push_back(p.power());
    std::sort(powers.rbegin(), powers.rend());
    for (const auto &p : top.paths)
        CHECK(p.power() >= powers[4] * (1.0 - 1e-12));
    for (std::size_t i = 1; i < top.paths.size(); ++i)
        CHECK(top.paths[i].path_index == top.paths[i - 1].path_index + 1);
}

TEST_CASE("direct legs")
{
    const auto tx = AntennaConfig::horn_105ghz({0.0, 0.0, 1.4});
    const auto rx = AntennaConfig::omni_105ghz({0.0, 24.0, 1.4});
    const double lambda = speed_of_light / 105e9;
    const Vec3 st{0.0, 5.0, 1.4};
    const auto a = direct_tx_leg(tx, 3, st, {}, lambda);
    const auto b = direct_rx_leg(rx, 3, st, {}, lambda);
    REQUIRE(a.paths.size() == 1);
    REQUIRE(b.paths.size() == 1);
    CHECK(a.paths[0].delay_s == doctest::Approx(5.0 / speed_of_light).epsilon(1e-14));
    CHECK(b.paths[0].delay_s == doctest::Approx(19.0 / speed_of_light).epsilon(1e-14));
    CHECK(std::abs(a.paths[0].amplitude) ==
          doctest::Approx(antenna_gain(tx, 90.0, 90.0) / (std::sqrt(4.0 * pi) * 5.0)).epsilon(1e-12));
    CHECK(std::abs(b.paths[0].amplitude) ==
          doctest::Approx(lambda * antenna_gain(rx, 270.0, 90.0) / (4.0 * pi * 19.0)).epsilon(1e-12));
    const auto r = concatenate_links(a, b, RcsTable::isotropic(1.0), 1);
    REQUIRE(r.paths.size() == 1);
    CHECK(r.paths[0].delay_s == doctest::Approx(24.0 / speed_of_light).epsilon(1e-14));
    CHECK(r.paths[0].cluster_index == 3);
}

TEST_CASE("composition errors")
{
    HalfLink a, b;
    a.paths.resize(1);
    b.paths.resize(1);
    b.st_id = 2;
    CHECK_THROWS_AS(concatenate_links(a, b, RcsTable::isotropic(1.0), 1), CompositionError);
    b.st_id = 1;
    b.timestamp_s = 0.5;
    CHECK_THROWS_AS(concatenate_links(a, b, RcsTable::isotropic(1.0), 1), CompositionError);

    ChannelRealization x, y;
    y.rx_antenna_id = 2;
    CHECK_THROWS_AS(assemble_isac_channel(x, y, ChannelRealization{}), CompositionError);
    y = ChannelRealization{};
    y.timestamp_s = 1.0;
    CHECK_THROWS_AS(assemble_isac_channel(x, ChannelRealization{}, y), CompositionError);
}

TEST_CASE("assembly conserves paths and power")
{
    std::mt19937_64 gen(12);
    ChannelRealization bac, tar1;
    for (int i = 0; i < 5; ++i)
    {
        PathComponent p;
        p.cluster_index = 1;
        p.path_index = i + 1;
        p.amplitude = {0.1 * (i + 1), 0.05};
        bac.paths.push_back(p);
        p.origin = Origin::TargetCoupled;
        p.path_index = i + 6;
        tar1.paths.push_back(p);
    }
    const auto tar2 = concatenate_links(leg(2, 5e-9, 0.0, gen), leg(3, 6e-9, 0.0, gen),
                                        RcsTable::isotropic(2.0), 4);
    const auto sen = assemble_isac_channel(bac, tar1, tar2);
    CHECK(sen.kind == ChannelKind::Sensing);
    CHECK(sen.paths.size() == bac.paths.size() + tar1.paths.size() + tar2.paths.size());
    CHECK(total_power(sen) ==
          doctest::Approx(total_power(bac) + total_power(tar1) + total_power(tar2)).epsilon(1e-12));
    std::size_t n_env = 0, n_c = 0, n_nc = 0;
    for (const auto &p : sen.paths)
    {
        n_env += p.origin == Origin::Environment;
        n_c += p.origin == Origin::TargetCoupled;
        n_nc += p.origin == Origin::TargetNonCoupled;
    }
    CHECK(n_env == 5);
    CHECK(n_c == 5);
    CHECK(n_nc == 6);

    const auto only = assemble_isac_channel(bac, ChannelRealization{}, ChannelRealization{});
    CHECK(only.paths == bac.paths);
}
