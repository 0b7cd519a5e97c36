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

#include <cstdint>
#include <vector>

#include "isac/core.hpp"
#include "isac/geometry.hpp"

namespace isac
{
    enum class AntennaPattern
    {
        Omni,
        Horn
    };

    struct AntennaConfig
    {
        AntennaPattern pattern = AntennaPattern::Omni;
        double az_hpbw_deg = 360.0;
        double el_hpbw_deg = 30.0;
        double boresight_az_deg = 90.0;
        double boresight_zen_deg = 90.0;
        double gain_dbi = 3.0;
        Vec3 location_m{0.0, 0.0, 1.4};
        Vec3 velocity_mps{};
        double side_lobe_floor_db = -30.0; // relative to the peak power gain

        double height_m() const { return location_m.z; }

        /// Throws ConfigError when the HPBW values fall outside (0, 360].
        void validate() const;

        /// 105 GHz horn: 8.5 deg / 9.9 deg, 25 dBi.
        static AntennaConfig horn_105ghz(Vec3 location, double boresight_az_deg = 90.0);
        /// 105 GHz omni: 360 deg / 30 deg, 3 dBi.
        static AntennaConfig omni_105ghz(Vec3 location);
    };

    /// Linear field gain toward (az, zen). Horn: Gaussian main lobe, exactly
    /// -3 dB at HPBW/2, floored at `side_lobe_floor_db`. Omni: azimuth-constant,
    /// Gaussian in elevation.
    double antenna_gain(const AntennaConfig &cfg, double az_deg, double zen_deg);

    /// antenna_gain divided by the gain toward (ref_az, ref_zen).
    double relative_antenna_gain(const AntennaConfig &cfg, double az_deg, double zen_deg,
                                 double ref_az_deg, double ref_zen_deg);

    /// Pattern power weight |F_tx(dep)|^2 |F_rx(arr)|^2 of a path.
    double pattern_power(const AntennaConfig &tx, const AntennaConfig &rx, const PathComponent &path);

    /// Doppler of one straight hop from `from` to `to`, both endpoints moving.
    double hop_doppler(const Vec3 &from, const Vec3 &to, const Vec3 &v_from, const Vec3 &v_to,
                       double wavelength_m);

    /// Doppler of a path with static scatterers: (r_tx . v_tx + r_rx . v_rx) / lambda.
    double path_doppler(const Vec3 &departure_unit, const Vec3 &arrival_unit,
                        const Vec3 &v_tx, const Vec3 &v_rx, double wavelength_m);

    /// Tx -> target -> Rx: the two single-hop shifts add.
    double two_hop_doppler(const Vec3 &tx, const Vec3 &target, const Vec3 &rx,
                           const Vec3 &v_tx, const Vec3 &v_target, const Vec3 &v_rx,
                           double wavelength_m);

    struct ClusterSpec
    {
        int cluster_index = 1;
        int num_paths = 1;
        double mean_delay_s = 0.0;
        double delay_spread_s = 0.0;
        double mean_aod_deg = 90.0, aod_spread_deg = 0.0;
        double mean_zod_deg = 90.0, zod_spread_deg = 0.0;
        double mean_aoa_deg = 270.0, aoa_spread_deg = 0.0;
        double mean_zoa_deg = 90.0, zoa_spread_deg = 0.0;
        double cluster_power_lin = 1.0;

        void validate() const;
    };

    /// Everything generate_environment needs.
    struct EnvironmentSpec
    {
        double carrier_hz = 105e9;
        AntennaConfig tx = AntennaConfig::horn_105ghz({0.0, 0.0, 1.4});
        AntennaConfig rx = AntennaConfig::omni_105ghz({0.0, 24.0, 1.4});
        std::vector<ClusterSpec> clusters;
        std::vector<PathComponent> explicit_paths;
        std::uint64_t rng_seed = 1;
        bool common_cluster_delay = true;
        int tx_antenna_id = 1;
        int rx_antenna_id = 1;

        double wavelength_m() const { return speed_of_light / carrier_hz; }
        void validate() const;
    };

    /// Environment channel (state e0) at time `t_s`. Explicit paths are echoed;
    /// clusters are drawn from per-cluster sub-streams of `rng_seed`.
    ChannelRealization generate_environment(const EnvironmentSpec &spec, double t_s);
}
