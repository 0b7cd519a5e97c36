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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace isac
{
    inline constexpr double speed_of_light = 299792458.0;
    inline constexpr double pi = std::numbers::pi;

    inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
    inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0;

        constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
        constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
        constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
        constexpr Vec3 operator-() const { return {-x, -y, -z}; }
        constexpr bool operator==(const Vec3 &) const = default;

        constexpr double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
        constexpr Vec3 cross(const Vec3 &o) const
        {
            return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
        }
        double norm() const { return std::sqrt(dot(*this)); }
        Vec3 normalized() const
        {
            const double n = norm();
            return {x / n, y / n, z / n};
        }
    };

    /// Spherical unit vector for azimuth (from +x towards +y) and zenith (from +z), degrees.
    inline Vec3 unit_vector(double az_deg, double zen_deg)
    {
        const double az = deg2rad(az_deg), zen = deg2rad(zen_deg);
        return {std::sin(zen) * std::cos(az), std::sin(zen) * std::sin(az), std::cos(zen)};
    }

    /// Azimuth in [0, 360) and zenith in [0, 180] of a non-zero vector.
    inline std::array<double, 2> direction_angles(const Vec3 &v)
    {
        const double n = v.norm();
        double az = rad2deg(std::atan2(v.y, v.x));
        if (az < 0.0)
            az += 360.0;
        if (az >= 360.0)
            az -= 360.0;
        const double zen = rad2deg(std::acos(std::clamp(v.z / n, -1.0, 1.0)));
        return {az, zen};
    }

    /// Wrap an angle difference into [-180, 180).
    inline double wrap_deg_signed(double deg)
    {
        double w = std::fmod(deg + 180.0, 360.0);
        if (w < 0.0)
            w += 360.0;
        return w - 180.0;
    }

    /// Wrap an azimuth into [0, 360).
    inline double wrap_azimuth(double deg)
    {
        double w = std::fmod(deg, 360.0);
        if (w < 0.0)
            w += 360.0;
        if (w >= 360.0)
            w = 0.0;
        return w;
    }
}
