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
#include <map>
#include <random>

#include "isac/core.hpp"
#include "isac/error.hpp"
#include "isac/geometry.hpp"
#include "isac/rng.hpp"

using namespace isac;

namespace
{
    PathComponent make_path(int c, int m, cdouble amp, double delay, double aod)
    {
        PathComponent p;
        p.cluster_index = c;
        p.path_index = m;
        p.amplitude = amp;
        p.delay_s = delay;
        p.aod_deg = aod;
        p.aoa_deg = 270.0;
        return p;
    }

    template <typename E>
    std::string code_of(auto &&fn)
    {
        try
        {
            fn();
        }
        catch (const E &e)
        {
            return e.code();
        }
        return "";
    }
}

TEST_CASE("unit vectors and angles round trip")
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> az(0.0, 359.999), zen(0.5, 179.5);
    for (int i = 0; i < 200; ++i)
    {
        const double a = az(gen), z = zen(gen);
        const auto v = unit_vector(a, z);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
        const auto back = direction_angles(v * 3.7);
        CHECK(back[0] == doctest::Approx(a).epsilon(1e-10));
        CHECK(back[1] == doctest::Approx(z).epsilon(1e-10));
    }
    CHECK(direction_angles({0.0, 1.0, 0.0})[0] == doctest::Approx(90.0));
    CHECK(wrap_azimuth(-10.0) == doctest::Approx(350.0));
    CHECK(wrap_deg_signed(190.0) == doctest::Approx(-170.0));
}

TEST_CASE("rng sub-streams are deterministic and independent")
{
    Rng a(42, "gbsm.cluster", 1), b(42, "gbsm.cluster", 1), c(42, "gbsm.cluster", 2), d(43, "gbsm.cluster", 1);
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x != c.uniform());
    CHECK(x != d.uniform());
    CHECK(derive_seed(1, "x", 0, 0) != derive_seed(1, "y", 0, 0));
    CHECK(derive_seed(1, "x", 1, 0) != derive_seed(1, "x", 0, 1));

    Rng r(7);
    double s = 0.0, s2 = 0.0, e = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const double z = r.normal();
        s += z;
        s2 += z * z;
        e += r.exponential(2.0);
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double ph = r.phase();
        REQUIRE(ph >= 0.0);
        REQUIRE(ph < 2.0 * pi);
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
    CHECK(std::abs(e / n - 2.0) < 0.03);
}

TEST_CASE("uniform axis")
{
    const auto ax = uniform_axis(0.0, 180.0, 5.0);
    CHECK(ax.size() == 37);
    CHECK(ax.back() == 180.0);
    CHECK(uniform_axis(0.0, 250.17e-9, 1e-9).size() == 251);
    CHECK(code_of<ConfigError>([] { uniform_axis(0.0, 1.0, 0.0); }) == "E_AXIS");
}

TEST_CASE("nearest bin ties go to the lower index")
{
    const std::vector<double> ax{0.0, 5.0, 10.0};
    CHECK(nearest_bin(ax, 2.5) == 0u);
    CHECK(nearest_bin(ax, 2.5000001) == 1u);
    CHECK(nearest_bin(ax, 7.5) == 1u);
    CHECK(nearest_bin(ax, -2.5) == 0u);
    CHECK(nearest_bin(ax, 12.5) == 2u);
    CHECK_FALSE(nearest_bin(ax, -2.6).has_value());
    CHECK_FALSE(nearest_bin(ax, 12.6).has_value());
    const std::vector<double> one{3.0};
    CHECK(nearest_bin(one, 1e9) == 0u);
}

TEST_CASE("paths in one cell are summed as phasors")
{
    ChannelRealization r;
    r.paths = {make_path(1, 1, {1.0, 0.0}, 10e-9, 90.0), make_path(1, 2, {-1.0, 0.0}, 10.2e-9, 91.0),
               make_path(2, 1, {0.0, 2.0}, 20e-9, 45.0)};
    const auto ax = uniform_axis(0.0, 180.0, 5.0);
    const auto dl = uniform_axis(0.0, 50e-9, 1e-9);
    const auto g = padp_from_realization(r, ax, dl);
    CHECK(g.at(18, 10) == 0.0);
    CHECK(g.at(9, 20) == doctest::Approx(4.0));
    CHECK(g.total() == doctest::Approx(4.0));

    r.paths[1].amplitude = {1.0, 0.0};
    CHECK(padp_from_realization(r, ax, dl).at(18, 10) == doctest::Approx(4.0));
}

TEST_CASE("PADP matches a brute-force binning oracle")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> az(0.0, 180.0), tau(0.0, 100e-9), amp(-1.0, 1.0);
    const auto ax = uniform_axis(0.0, 180.0, 5.0);
    const auto dl = uniform_axis(0.0, 100e-9, 1e-9);
    for (int trial = 0; trial < 20; ++trial)
    {
        ChannelRealization r;
        std::map<std::pair<long, long>, cdouble> cells;
        for (int m = 1; m <= 60; ++m)
        {
            auto p = make_path(1, m, {amp(gen), amp(gen)}, tau(gen), az(gen));
            r.paths.push_back(p);
            // oracle: integer rounding of the scaled value, halves go down
            auto round_half_down = [](double v) { return static_cast<long>(std::ceil(v - 0.5)); };
            cells[{round_half_down(p.aod_deg / 5.0), round_half_down(p.delay_s / 1e-9)}] += p.amplitude;
        }
        const auto g = padp_from_realization(r, ax, dl);
        double total = 0.0;
        for (const auto &[k, v] : cells)
        {
            CHECK(g.at(static_cast<std::size_t>(k.first), static_cast<std::size_t>(k.second)) ==
                  doctest::Approx(std::norm(v)).epsilon(1e-12));
            total += std::norm(v);
        }
        CHECK(g.total() == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("out-of-range policies")
{
    ChannelRealization r;
    r.paths = {make_path(1, 1, {1.0, 0.0}, 10e-9, 90.0), make_path(1, 2, {1.0, 0.0}, 400e-9, 200.0)};
    const auto ax = uniform_axis(0.0, 180.0, 5.0);
    const auto dl = uniform_axis(0.0, 50e-9, 1e-9);
    CHECK_THROWS_AS(padp_from_realization(r, ax, dl, OutOfRange::Strict), RangeError);
    CHECK(padp_from_realization(r, ax, dl, OutOfRange::Drop).total() == doctest::Approx(1.0));
    const auto c = padp_from_realization(r, ax, dl, OutOfRange::Clamp);
    CHECK(c.at(36, 50) == doctest::Approx(1.0));
}

TEST_CASE("PAS slice and marginals")
{
    PadpGrid g({0.0, 5.0}, {0.0, 1e-9, 2e-9}, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    const auto pas = pas_slice(g, 1e-9, 2e-9);
    CHECK(pas[0] == 5.0);
    CHECK(pas[1] == 11.0);
    CHECK(angle_marginal(g) == std::vector<double>{6.0, 15.0});
    CHECK(delay_marginal(g) == std::vector<double>{5.0, 7.0, 9.0});
    CHECK(code_of<ConfigError>([&] { pas_slice(g, 2e-9, 1e-9); }) == "E_WINDOW");
    CHECK_THROWS_AS(PadpGrid({0.0}, {0.0}, {1.0, 2.0}), DimensionError);
    CHECK(code_of<ConfigError>([] { PadpGrid({0.0}, {0.0}, {-1.0}); }) == "E_PADP_NEGATIVE");
}

TEST_CASE("dB conversion clamps at the floor")
{
    const std::vector<double> p{1.0, 1e-3, 0.0};
    const auto db = to_db(p);
    CHECK(db[0] == doctest::Approx(0.0));
    CHECK(db[1] == doctest::Approx(-30.0));
    CHECK(db[2] == doctest::Approx(-120.0));
    CHECK(to_db(p, -20.0)[1] == doctest::Approx(-20.0));
}

TEST_CASE("power bookkeeping and truncation")
{
    ChannelRealization r;
    r.paths = {make_path(1, 1, {1.0, 0.0}, 80e-9, 90.0), make_path(1, 2, {0.0, 2.0}, 300e-9, 120.0)};
    CHECK(total_power(r) == doctest::Approx(5.0));
    Region near;
    near.delay_hi_s = 100e-9;
    CHECK(total_power(r, near) == doctest::Approx(1.0));
    const auto t = truncate_range(r, 75.0);
    REQUIRE(t.paths.size() == 1);
    CHECK(t.paths[0].path_index == 1);
}

TEST_CASE("path validation codes")
{
    auto p = make_path(1, 1, {1.0, 0.0}, 1e-9, 10.0);
    validate_path(p);
    auto bad = p;
    bad.path_index = 0;
    CHECK(code_of<ConfigError>([&] { validate_path(bad); }) == "E_PATH_INDEX");
    bad = p;
    bad.delay_s = -1.0;
    CHECK(code_of<ConfigError>([&] { validate_path(bad); }) == "E_PATH_DELAY");
    bad = p;
    bad.aod_deg = 360.0;
    CHECK(code_of<ConfigError>([&] { validate_path(bad); }) == "E_PATH_ANGLE");
    bad = p;
    bad.initial_phase_rad = 2.0 * pi;
    CHECK(code_of<ConfigError>([&] { validate_path(bad); }) == "E_PATH_PHASE");

    ChannelRealization r;
    r.paths = {p, p};
    CHECK(code_of<ConfigError>([&] { r.validate(); }) == "E_PATH_DUPLICATE");
    r.paths[1].origin = Origin::TargetCoupled;
    r.validate();
}

TEST_CASE("origin names")
{
    for (const auto o : {Origin::Environment, Origin::TargetCoupled, Origin::TargetNonCoupled})
        CHECK(origin_from_string(to_string(o)) == o);
    CHECK(code_of<ConfigError>([] { origin_from_string("wall"); }) == "E_ORIGIN");
}
