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
#include <cstddef>
#include <cstdint>
#include <vector>

#include "isac/core.hpp"
#include "isac/gbsm.hpp"

namespace isac
{
    enum class RcsInterpolation
    {
        Nearest,
        Bilinear
    };

    /// One tabulated RCS value. Incident direction (theta_in, phi_in) is where
    /// the wave arrives from as seen at the target, outgoing (theta_out, phi_out)
    /// is where it leaves to. Zenith/azimuth in degrees, sigma in m^2.
    struct RcsSample
    {
        double theta_in_deg = 90.0;
        double phi_in_deg = 0.0;
        double theta_out_deg = 90.0;
        double phi_out_deg = 0.0;
        double sigma_m2 = 1.0;
    };

    /// Bistatic RCS over a full 4-D grid of (theta_in, phi_in, theta_out, phi_out),
    /// or a constant sigma0. Queries outside the grid fall back to sigma0.
    class RcsTable
    {
    public:
        RcsTable() = default;

        static RcsTable isotropic(double sigma0_m2);

        /// Every combination of the distinct axis values must be present exactly once.
        static RcsTable from_samples(const std::vector<RcsSample> &samples,
                                     RcsInterpolation interpolation = RcsInterpolation::Bilinear,
                                     double fallback_sigma_m2 = 1.0);

        bool is_isotropic() const { return values_.empty(); }
        double fallback() const { return sigma0_; }
        RcsInterpolation interpolation() const { return interp_; }

        /// Same table with every value multiplied by `factor` > 0.
        RcsTable scaled(double factor) const;

        double lookup(double theta_in_deg, double phi_in_deg, double theta_out_deg, double phi_out_deg) const;

    private:
        double sigma0_ = 1.0;
        RcsInterpolation interp_ = RcsInterpolation::Bilinear;
        std::array<std::vector<double>, 4> axes_;
        std::vector<double> values_; // row-major over axes_
    };

    /// Direction pair as zenith/azimuth in degrees.
    struct Direction
    {
        double zenith_deg = 90.0;
        double azimuth_deg = 0.0;
    };

    double rcs_lookup(const RcsTable &table, const Direction &gamma_in, const Direction &gamma_out);

    /// Paths of one leg of the Tx -> ST -> Rx detour. For the Tx leg, AoA/ZoA
    /// describe the arrival at the target; for the Rx leg, AoD/ZoD the departure.
    struct HalfLink
    {
        int st_id = 1;
        int antenna_id = 1; // Tx id for the Tx leg, Rx id for the Rx leg
        double timestamp_s = 0.0;
        std::vector<PathComponent> paths;
    };

    /// Straight-line Tx -> ST leg: amplitude F_tx / (sqrt(4 pi) d).
    HalfLink direct_tx_leg(const AntennaConfig &tx, int st_id, const Vec3 &st_pos, const Vec3 &st_vel,
                           double wavelength_m, double t_s = 0.0);

    /// Straight-line ST -> Rx leg: amplitude lambda F_rx / (4 pi d).
    HalfLink direct_rx_leg(const AntennaConfig &rx, int st_id, const Vec3 &st_pos, const Vec3 &st_vel,
                           double wavelength_m, double t_s = 0.0);

    /// Non-coupled target channel: every Tx-leg path joined with every Rx-leg
    /// path through the RCS, with a fresh seeded phase per joined path. Paths
    /// with zero amplitude are dropped; `top_k` > 0 keeps only the strongest.
    ChannelRealization concatenate_links(const HalfLink &tx_st, const HalfLink &st_rx, const RcsTable &table,
                                         std::uint64_t seed, std::size_t top_k = 0);

    /// Sensing channel: union of background, coupled and non-coupled target paths.
    ChannelRealization assemble_isac_channel(const ChannelRealization &bac, const ChannelRealization &tar1,
                                             const ChannelRealization &tar2);
}
