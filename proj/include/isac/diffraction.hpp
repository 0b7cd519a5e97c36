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

#include <array>
#include <complex>
#include <limits>

#include "isac/gbsm.hpp"
#include "isac/geometry.hpp"

namespace isac
{
    /// Transmission nodes L1, L2 of the path being diffracted.
    struct LinkGeometry
    {
        Vec3 l1_pos_m;
        Vec3 l2_pos_m;
        double wavelength_m = speed_of_light / 105e9;
        double e0_field = 1.0;

        double length() const { return (l2_pos_m - l1_pos_m).norm(); }
        double wavenumber() const { return 2.0 * pi / wavelength_m; }
        void validate() const;
    };

    /// Thin absorbing rectangle facing the L1L2 line. Extents are measured from
    /// `center_m`: w1 to the left and w2 to the right (looking from L1 towards
    /// L2), h1 above and h2 below. Infinite extents model half-planes.
    struct ScreenGeometry
    {
        Vec3 center_m;
        double w1_m = 0.0;
        double w2_m = 0.0;
        double h1_m = 0.0;
        double h2_m = 0.0;

        void validate() const;
    };

    enum Edge : std::size_t
    {
        EdgeH1 = 0,
        EdgeH2 = 1,
        EdgeW1 = 2,
        EdgeW2 = 3
    };

    /// Screen expressed in the plane through K0 perpendicular to the link:
    /// x to the right, y up, both relative to the point where the ray crosses.
    struct ScreenFrame
    {
        double r0 = 0.0; // L1 -> K0
        double s0 = 0.0; // K0 -> L2
        double x_lo = 0.0, x_hi = 0.0;
        double y_lo = 0.0, y_hi = 0.0;
        Vec3 origin;     // K0
        Vec3 e_right, e_up, e_link;

        Vec3 to_world(double x, double y) const { return origin + e_right * x + e_up * y; }
    };

    /// Throws GeometryError unless the screen plane lies strictly between L1 and L2.
    ScreenFrame screen_frame(const LinkGeometry &link, const ScreenGeometry &screen);

    /// Inputs of a single knife-edge factor. `sign` is +1 for an edge on the
    /// shadow side and -1 for the near edge of a dimension the ray clears.
    struct EdgeClearance
    {
        double r = 0.0;  // L1 -> edge point
        double s = 0.0;  // edge point -> L2
        double r0 = 0.0; // L1 -> K0
        double s0 = 0.0; // K0 -> L2
        int sign = 1;
    };

    /// Arc-tangent knife-edge factor F in (-1/2, 1/2).
    double ked_edge_factor(const EdgeClearance &edge, double wavelength_m);

    struct EdgeFactors
    {
        std::array<double, 4> f{};   // indexed by Edge
        std::array<int, 4> sign{};
        std::array<double, 4> offset_m{}; // edge coordinate in the screen frame
    };

    /// Shadow/lit classification and the four knife-edge factors.
    EdgeFactors edge_factors(const LinkGeometry &link, const ScreenGeometry &screen);

    /// Four-knife-edge attenuation in dB, +infinity for total blockage.
    double fourked_attenuation(const LinkGeometry &link, const ScreenGeometry &screen);

    /// Linear power gains of the Tx (g_r) and Rx (g_s) antennas toward each edge.
    struct EdgeGainSet
    {
        std::array<double, 4> g_r{1.0, 1.0, 1.0, 1.0};
        std::array<double, 4> g_s{1.0, 1.0, 1.0, 1.0};

        static EdgeGainSet unit() { return {}; }
        void validate() const;
    };

    /// Gain-weighted four-knife-edge attenuation in dB.
    double fourkedg_attenuation(const LinkGeometry &link, const ScreenGeometry &screen,
                                const EdgeGainSet &gains);

    /// Gains of `tx` (at L1) and `rx` (at L2) toward each edge point, relative
    /// to their gains along the link. The near edge of a cleared dimension keeps
    /// weight 1 since its open half-line contains the direct ray.
    EdgeGainSet edge_gains(const LinkGeometry &link, const ScreenGeometry &screen,
                           const AntennaConfig &tx, const AntennaConfig &rx);

    inline constexpr double attenuation_cap_db = 200.0;

    /// Clamp to the serialization cap.
    inline double capped_db(double db) { return db > attenuation_cap_db ? attenuation_cap_db : db; }

    struct QuadratureSettings
    {
        double fresnel_zones = 40.0; // minimum truncation radius, in zones
        double rel_tol = 1e-4;
        int max_refinements = 5;
    };

    struct DiffractionField
    {
        std::complex<double> u;
        std::complex<double> u0; // free-space reference E0 e^{ik(r0+s0)}/(r0+s0)
        int refinements = 0;
        double rel_change = 0.0;

        double relative_magnitude() const { return std::abs(u) / std::abs(u0); }
        double attenuation_db() const;
    };

    /// Numerical Fresnel-Kirchhoff integral over the aperture plane minus the
    /// screen, truncated with a smooth window at (at least) the configured
    /// number of Fresnel zones.
    DiffractionField fresnel_kirchhoff_field(const LinkGeometry &link, const ScreenGeometry &screen,
                                             const QuadratureSettings &quad = {});

    /// Link along a path leaving `tx_pos` in direction (aod, zod) with total
    /// unfolded length `path_length_m`, obstructed by a screen at the target's
    /// true position. Sweeping aod this way is the same as rotating the horn
    /// while keeping the free-space reference fixed.
    struct TranslatedGeometry
    {
        LinkGeometry link;
        ScreenGeometry screen;
    };

    TranslatedGeometry equivalent_translation(const Vec3 &tx_pos, double aod_deg, double zod_deg,
                                              double path_length_m, const ScreenGeometry &target_screen,
                                              double wavelength_m);

    /// `antenna` re-pointed so that its boresight follows (az, zen).
    AntennaConfig steer(AntennaConfig antenna, double az_deg, double zen_deg);
}
