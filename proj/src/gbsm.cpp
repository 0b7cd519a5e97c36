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

#include "isac/gbsm.hpp"

#include <cmath>
#include <numbers>

#include "isac/error.hpp"
#include "isac/rng.hpp"

namespace isac
{
    void AntennaConfig::validate() const
    {
        if (!(el_hpbw_deg > 0.0 && el_hpbw_deg <= 360.0))
            throw ConfigError("antenna el_hpbw_deg must lie in (0, 360]", "E_HPBW_RANGE");
        if (pattern == AntennaPattern::Horn && !(az_hpbw_deg > 0.0 && az_hpbw_deg <= 360.0))
            throw ConfigError("antenna az_hpbw_deg must lie in (0, 360]", "E_HPBW_RANGE");
        if (!std::isfinite(gain_dbi) || !std::isfinite(side_lobe_floor_db))
            throw ConfigError("antenna gains must be finite", "E_ANTENNA");
    }

    AntennaConfig AntennaConfig::horn_105ghz(Vec3 location, double boresight_az_deg)
    {
        AntennaConfig a;
        a.pattern = AntennaPattern::Horn;
        a.az_hpbw_deg = 8.5;
        a.el_hpbw_deg = 9.9;
        a.boresight_az_deg = boresight_az_deg;
        a.gain_dbi = 25.0;
        a.location_m = location;
        return a;
    }

    AntennaConfig AntennaConfig::omni_105ghz(Vec3 location)
    {
        AntennaConfig a;
        a.pattern = AntennaPattern::Omni;
        a.az_hpbw_deg = 360.0;
        a.el_hpbw_deg = 30.0;
        a.gain_dbi = 3.0;
        a.location_m = location;
        return a;
    }

    namespace
    {
        // Relative power of a Gaussian lobe: 0.5 at offset = hpbw/2.
        double gaussian_lobe(double offset_deg, double hpbw_deg)
        {
            const double u = 2.0 * offset_deg / hpbw_deg;
            return std::exp(-std::numbers::ln2 * u * u);
        }
    }

    double antenna_gain(const AntennaConfig &cfg, double az_deg, double zen_deg)
    {
        const double d_el = zen_deg - cfg.boresight_zen_deg;
        double rel = gaussian_lobe(d_el, cfg.el_hpbw_deg);
        if (cfg.pattern == AntennaPattern::Horn)
            rel *= gaussian_lobe(wrap_deg_signed(az_deg - cfg.boresight_az_deg), cfg.az_hpbw_deg);
        rel = std::max(rel, std::pow(10.0, cfg.side_lobe_floor_db / 10.0));
        return std::sqrt(std::pow(10.0, cfg.gain_dbi / 10.0) * rel);
    }

    double relative_antenna_gain(const AntennaConfig &cfg, double az_deg, double zen_deg,
                                 double ref_az_deg, double ref_zen_deg)
    {
        return antenna_gain(cfg, az_deg, zen_deg) / antenna_gain(cfg, ref_az_deg, ref_zen_deg);
    }

    double pattern_power(const AntennaConfig &tx, const AntennaConfig &rx, const PathComponent &path)
    {
        const double ft = antenna_gain(tx, path.aod_deg, path.zod_deg);
        const double fr = antenna_gain(rx, path.aoa_deg, path.zoa_deg);
        return ft * ft * fr * fr;
    }

    double hop_doppler(const Vec3 &from, const Vec3 &to, const Vec3 &v_from, const Vec3 &v_to,
                       double wavelength_m)
    {
        if (!(wavelength_m > 0.0))
            throw ConfigError("wavelength must be > 0", "E_CARRIER_RANGE");
        const Vec3 d = to - from;
        const double len = d.norm();
        if (len == 0.0)
            throw GeometryError("Doppler hop with coincident endpoints");
        const Vec3 u = d * (1.0 / len);
        return (v_from.dot(u) - v_to.dot(u)) / wavelength_m;
    }

    double path_doppler(const Vec3 &departure_unit, const Vec3 &arrival_unit,
                        const Vec3 &v_tx, const Vec3 &v_rx, double wavelength_m)
    {
        if (!(wavelength_m > 0.0))
            throw ConfigError("wavelength must be > 0", "E_CARRIER_RANGE");
        return (departure_unit.dot(v_tx) + arrival_unit.dot(v_rx)) / wavelength_m;
    }

    double two_hop_doppler(const Vec3 &tx, const Vec3 &target, const Vec3 &rx,
                           const Vec3 &v_tx, const Vec3 &v_target, const Vec3 &v_rx,
                           double wavelength_m)
    {
        return hop_doppler(tx, target, v_tx, v_target, wavelength_m) +
               hop_doppler(target, rx, v_target, v_rx, wavelength_m);
    }

    void ClusterSpec::validate() const
    {
        const auto where = "cluster " + std::to_string(cluster_index) + ": ";
        if (cluster_index < 1)
            throw ConfigError(where + "cluster_index must be >= 1", "E_CLUSTER");
        if (num_paths < 1)
            throw ConfigError(where + "num_paths must be >= 1", "E_CLUSTER");
        if (delay_spread_s < 0.0 || aod_spread_deg < 0.0 || zod_spread_deg < 0.0 ||
            aoa_spread_deg < 0.0 || zoa_spread_deg < 0.0)
            throw ConfigError(where + "spreads must be >= 0", "E_CLUSTER");
        if (!(cluster_power_lin >= 0.0))
            throw ConfigError(where + "cluster_power_lin must be >= 0", "E_CLUSTER");
        if (mean_delay_s < 0.0)
            throw ConfigError(where + "mean_delay_s must be >= 0", "E_CLUSTER");
    }

    void EnvironmentSpec::validate() const
    {
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw ConfigError("carrier_hz must be > 0", "E_CARRIER_RANGE");
        if (clusters.empty() && explicit_paths.empty())
            throw ConfigError("no clusters and no explicit paths", "E_NO_ENVIRONMENT");
        tx.validate();
        rx.validate();
        for (const auto &c : clusters)
            c.validate();
    }

    namespace
    {
        double reflect_zenith(double zen)
        {
            zen = std::fmod(zen, 360.0);
            if (zen < 0.0)
                zen += 360.0;
            return zen > 180.0 ? 360.0 - zen : zen;
        }

        double wrap_phase(double phase)
        {
            double w = std::fmod(phase, 2.0 * pi);
            if (w < 0.0)
                w += 2.0 * pi;
            return w >= 2.0 * pi ? 0.0 : w;
        }
    }

    ChannelRealization generate_environment(const EnvironmentSpec &spec, double t_s)
    {
        spec.validate();
        const double lambda = spec.wavelength_m();

        ChannelRealization real;
        real.state = ChannelState::EnvOnly;
        real.kind = ChannelKind::Environment;
        real.tx_antenna_id = spec.tx_antenna_id;
        real.rx_antenna_id = spec.rx_antenna_id;
        real.timestamp_s = t_s;

        for (auto p : spec.explicit_paths)
        {
            const double doppler_phase = 2.0 * pi * p.doppler_hz * t_s;
            if (doppler_phase != 0.0)
                p.amplitude *= std::polar(1.0, doppler_phase);
            p.origin = Origin::Environment;
            real.paths.push_back(p);
        }

        for (const auto &c : spec.clusters)
        {
            Rng rng(spec.rng_seed, "gbsm.cluster", static_cast<std::uint64_t>(c.cluster_index));
            const double path_amp = std::sqrt(c.cluster_power_lin / c.num_paths);
            for (int m = 1; m <= c.num_paths; ++m)
            {
                PathComponent p;
                p.cluster_index = c.cluster_index;
                p.path_index = m;
                p.origin = Origin::Environment;
                p.initial_phase_rad = rng.phase();
                p.aod_deg = wrap_azimuth(rng.normal(c.mean_aod_deg, c.aod_spread_deg));
                p.zod_deg = reflect_zenith(rng.normal(c.mean_zod_deg, c.zod_spread_deg));
                p.aoa_deg = wrap_azimuth(rng.normal(c.mean_aoa_deg, c.aoa_spread_deg));
                p.zoa_deg = reflect_zenith(rng.normal(c.mean_zoa_deg, c.zoa_spread_deg));
                const double delay_offset = rng.exponential(c.delay_spread_s);
                p.delay_s = c.mean_delay_s + (spec.common_cluster_delay ? 0.0 : delay_offset);

                const Vec3 r_tx = p.departure_unit();
                const Vec3 r_rx = p.arrival_unit();
                p.doppler_hz = path_doppler(r_tx, r_rx, spec.tx.velocity_mps, spec.rx.velocity_mps, lambda);

                const double gain = antenna_gain(spec.tx, p.aod_deg, p.zod_deg) *
                                    antenna_gain(spec.rx, p.aoa_deg, p.zoa_deg);
                const double phase = p.initial_phase_rad +
                                     2.0 * pi * r_rx.dot(spec.rx.location_m) / lambda +
                                     2.0 * pi * r_tx.dot(spec.tx.location_m) / lambda +
                                     2.0 * pi * p.doppler_hz * t_s;
                p.amplitude = std::polar(path_amp * gain, wrap_phase(phase));
                real.paths.push_back(p);
            }
        }

        real.validate();
        return real;
    }
}
