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

#include "isac/analysis.hpp"
#include "isac/error.hpp"
#include "isac/gbsm.hpp"

using namespace isac;

namespace
{
    EnvironmentSpec cluster_spec(std::uint64_t seed)
    {
        EnvironmentSpec s;
        s.rng_seed = seed;
        ClusterSpec c1;
        c1.cluster_index = 1;
        c1.num_paths = 20;
        c1.mean_delay_s = 100e-9;
        c1.delay_spread_s = 10e-9;
        c1.mean_aod_deg = 120.0;
        c1.aod_spread_deg = 5.0;
        c1.mean_aoa_deg = 200.0;
        c1.aoa_spread_deg = 8.0;
        c1.zod_spread_deg = 2.0;
        c1.zoa_spread_deg = 2.0;
        c1.cluster_power_lin = 2.0;
        ClusterSpec c2 = c1;
        c2.cluster_index = 2;
        c2.num_paths = 7;
        c2.mean_aod_deg = 30.0;
        c2.cluster_power_lin = 0.5;
        s.clusters = {c1, c2};
        s.common_cluster_delay = false;
        return s;
    }
}

TEST_CASE("antenna peak gain and half-power points")
{
    const auto horn = AntennaConfig::horn_105ghz({0.0, 0.0, 1.4});
    CHECK(antenna_gain(horn, 90.0, 90.0) == doctest::Approx(std::pow(10.0, 25.0 / 20.0)).epsilon(1e-12));
    CHECK(antenna_gain(horn, 90.0, 90.0) == doctest::Approx(17.7828).epsilon(1e-5));
    const double peak = antenna_gain(horn, 90.0, 90.0);
    CHECK(antenna_gain(horn, 90.0 + 4.25, 90.0) == doctest::Approx(peak / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(antenna_gain(horn, 90.0 - 4.25, 90.0) == doctest::Approx(peak / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(antenna_gain(horn, 90.0, 90.0 + 4.95) == doctest::Approx(peak / std::sqrt(2.0)).epsilon(1e-12));
    // side-lobe floor: -30 dB power = peak field / sqrt(1000)
    CHECK(antenna_gain(horn, 270.0, 90.0) == doctest::Approx(peak / std::sqrt(1000.0)).epsilon(1e-12));

    const auto omni = AntennaConfig::omni_105ghz({0.0, 24.0, 1.4});
    CHECK(antenna_gain(omni, 0.0, 90.0) == antenna_gain(omni, 137.0, 90.0));
    CHECK(antenna_gain(omni, 0.0, 90.0) == doctest::Approx(std::pow(10.0, 3.0 / 20.0)));
    CHECK(antenna_gain(omni, 0.0, 105.0) == doctest::Approx(antenna_gain(omni, 0.0, 90.0) / std::sqrt(2.0)));
    CHECK(relative_antenna_gain(horn, 90.0, 90.0, 90.0, 90.0) == 1.0);
}

TEST_CASE("antenna validation")
{
    auto a = AntennaConfig::horn_105ghz({});
    a.az_hpbw_deg = 0.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a.az_hpbw_deg = 400.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    auto o = AntennaConfig::omni_105ghz({});
    o.az_hpbw_deg = 0.0; // ignored by the omni pattern
    o.validate();
}

TEST_CASE("Doppler shifts")
{
    const double lambda = speed_of_light / 105e9;
    CHECK(path_doppler({0, 1, 0}, {0, -1, 0}, {}, {}, lambda) == 0.0);
    // Rx moving at 1 m/s towards the Tx along the LoS
    const double f = path_doppler({0, 1, 0}, {0, -1, 0}, {}, {0, -1, 0}, lambda);
    CHECK(f == doctest::Approx(1.0 / lambda).epsilon(1e-14));
    CHECK(std::abs(f - 350.1) < 0.2);
    CHECK(hop_doppler({0, 0, 0}, {0, 24, 0}, {}, {0, -1, 0}, lambda) == doctest::Approx(f).epsilon(1e-14));

    const Vec3 tx{0, 0, 1.4}, st{1.0, 5.0, 1.4}, rx{0, 24, 1.4};
    const Vec3 vt{0.3, -0.2, 0.0}, vs{1.2, 0.5, 0.0}, vr{0.0, -0.7, 0.1};
    CHECK(two_hop_doppler(tx, st, rx, vt, vs, vr, lambda) ==
          hop_doppler(tx, st, vt, vs, lambda) + hop_doppler(st, rx, vs, vr, lambda));
    CHECK_THROWS_AS(hop_doppler(tx, tx, {}, {}, lambda), GeometryError);
}

TEST_CASE("explicit paths are echoed")
{
    EnvironmentSpec s;
    PathComponent p;
    p.amplitude = {0.3, -0.4};
    p.delay_s = 80e-9;
    p.aod_deg = 90.0;
    p.aoa_deg = 270.0;
    p.initial_phase_rad = 1.0;
    PathComponent q = p;
    q.path_index = 2;
    q.aod_deg = 100.0;
    s.explicit_paths = {p, q};
    const auto r = generate_environment(s, 0.0);
    CHECK(r.paths == s.explicit_paths);
    CHECK(r.state == ChannelState::EnvOnly);
}

TEST_CASE("generation is seeded and time-invariant when static")
{
    const auto a = generate_environment(cluster_spec(9), 0.0);
    const auto b = generate_environment(cluster_spec(9), 0.0);
    const auto c = generate_environment(cluster_spec(10), 0.0);
    CHECK(a == b);
    CHECK_FALSE(a.paths == c.paths);
    CHECK(a.paths.size() == 27);
    for (const auto &p : a.paths)
        CHECK(p.doppler_hz == 0.0);
    const auto later = generate_environment(cluster_spec(9), 1.0);
    CHECK(later.paths == a.paths);
}

TEST_CASE("moving Rx rotates phases at the Doppler rate")
{
    auto s = cluster_spec(4);
    s.rx.velocity_mps = {0.0, -1.0, 0.0};
    const auto r0 = generate_environment(s, 0.0);
    const double t = 1e-4;
    const auto r1 = generate_environment(s, t);
    for (std::size_t i = 0; i < r0.paths.size(); ++i)
    {
        const auto ratio = r1.paths[i].amplitude / r0.paths[i].amplitude;
        CHECK(std::abs(ratio) == doctest::Approx(1.0).epsilon(1e-12));
        const double expected = std::remainder(2.0 * pi * r0.paths[i].doppler_hz * t, 2.0 * pi);
        CHECK(std::remainder(std::arg(ratio) - expected, 2.0 * pi) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("path powers sum to the cluster powers with unit patterns")
{
    auto s = cluster_spec(5);
    for (auto &c : s.clusters)
        c.zod_spread_deg = c.zoa_spread_deg = 0.0;
    s.tx = AntennaConfig::omni_105ghz({0, 0, 1.4});
    s.rx = AntennaConfig::omni_105ghz({0, 24, 1.4});
    s.tx.gain_dbi = s.rx.gain_dbi = 0.0;
    const auto r = generate_environment(s, 0.0);
    CHECK(total_power(r) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("common cluster delay")
{
    auto s = cluster_spec(6);
    s.common_cluster_delay = true;
    for (const auto &p : generate_environment(s, 0.0).paths)
        CHECK(p.delay_s == 100e-9);
}

TEST_CASE("angular spread and phase uniformity")
{
    EnvironmentSpec s;
    ClusterSpec c;
    c.num_paths = 20000;
    c.mean_aod_deg = 180.0;
    c.aod_spread_deg = 6.0;
    s.clusters = {c};
    s.rng_seed = 77;
    const auto r = generate_environment(s, 0.0);
    double m = 0.0, v = 0.0;
    std::vector<double> phases;
    for (const auto &p : r.paths)
    {
        m += p.aod_deg;
        phases.push_back(p.initial_phase_rad);
    }
    m /= static_cast<double>(r.paths.size());
    for (const auto &p : r.paths)
        v += (p.aod_deg - m) * (p.aod_deg - m);
    const double sd = std::sqrt(v / static_cast<double>(r.paths.size() - 1));
    CHECK(std::abs(sd / 6.0 - 1.0) < 0.05);

    const auto ks = ks_test(phases, [](double x) { return x / (2.0 * pi); });
    CHECK(ks.pvalue > 0.01);
}

TEST_CASE("pattern power is reciprocal")
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> az(0.0, 359.9), zen(60.0, 120.0);
    const auto tx = AntennaConfig::horn_105ghz({0, 0, 1.4}, 80.0);
    const auto rx = AntennaConfig::omni_105ghz({0, 24, 1.4});
    for (int i = 0; i < 100; ++i)
    {
        PathComponent p;
        p.aod_deg = az(gen);
        p.zod_deg = zen(gen);
        p.aoa_deg = az(gen);
        p.zoa_deg = zen(gen);
        PathComponent rev = p;
        std::swap(rev.aod_deg, rev.aoa_deg);
        std::swap(rev.zod_deg, rev.zoa_deg);
        CHECK(pattern_power(tx, rx, p) == doctest::Approx(pattern_power(rx, tx, rev)).epsilon(1e-14));
    }
}

TEST_CASE("environment spec errors")
{
    EnvironmentSpec s;
    try
    {
        generate_environment(s, 0.0);
        FAIL("expected an error");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.code() == "E_NO_ENVIRONMENT");
    }
    s.explicit_paths.push_back({});
    s.carrier_hz = -1.0;
    try
    {
        generate_environment(s, 0.0);
        FAIL("expected an error");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.code() == "E_CARRIER_RANGE");
    }
    ClusterSpec bad;
    bad.num_paths = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
