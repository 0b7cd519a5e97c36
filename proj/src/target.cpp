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

#include "isac/target.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "isac/error.hpp"
#include "isac/rng.hpp"

namespace isac
{
    RcsTable RcsTable::isotropic(double sigma0_m2)
    {
        if (!(sigma0_m2 >= 0.0) || !std::isfinite(sigma0_m2))
            throw ConfigError("RCS must be finite and >= 0", "E_RCS");
        RcsTable t;
        t.sigma0_ = sigma0_m2;
        return t;
    }

    RcsTable RcsTable::from_samples(const std::vector<RcsSample> &samples, RcsInterpolation interpolation,
                                    double fallback_sigma_m2)
    {
        RcsTable t = isotropic(fallback_sigma_m2);
        t.interp_ = interpolation;
        if (samples.empty())
            return t;

        auto coords = [](const RcsSample &s) {
            return std::array<double, 4>{s.theta_in_deg, s.phi_in_deg, s.theta_out_deg, s.phi_out_deg};
        };
        for (const auto &s : samples)
        {
            if (!(s.sigma_m2 >= 0.0) || !std::isfinite(s.sigma_m2))
                throw ConfigError("RCS table values must be finite and >= 0", "E_RCS");
            const auto c = coords(s);
            for (std::size_t d = 0; d < 4; ++d)
                t.axes_[d].push_back(c[d]);
        }
        std::size_t cells = 1;
        for (auto &ax : t.axes_)
        {
            std::sort(ax.begin(), ax.end());
            ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
            cells *= ax.size();
        }
        if (cells != samples.size())
            throw DataError("RCS table is not a full grid: " + std::to_string(samples.size()) +
                            " rows for " + std::to_string(cells) + " grid nodes");

        t.values_.assign(cells, -1.0);
        for (const auto &s : samples)
        {
            const auto c = coords(s);
            std::size_t flat = 0;
            for (std::size_t d = 0; d < 4; ++d)
            {
                const auto &ax = t.axes_[d];
                flat = flat * ax.size() + static_cast<std::size_t>(std::lower_bound(ax.begin(), ax.end(), c[d]) - ax.begin());
            }
            if (t.values_[flat] >= 0.0)
                throw DataError("RCS table has a duplicate grid node");
            t.values_[flat] = s.sigma_m2;
        }
        return t;
    }

    RcsTable RcsTable::scaled(double factor) const
    {
        if (!(factor > 0.0))
            throw ConfigError("RCS scale factor must be > 0", "E_RCS");
        RcsTable t = *this;
        t.sigma0_ *= factor;
        for (auto &v : t.values_)
            v *= factor;
        return t;
    }

    double RcsTable::lookup(double theta_in_deg, double phi_in_deg, double theta_out_deg, double phi_out_deg) const
    {
        if (values_.empty())
            return sigma0_;

        const std::array<double, 4> q{theta_in_deg, phi_in_deg, theta_out_deg, phi_out_deg};
        std::array<std::size_t, 4> lo{};
        std::array<double, 4> frac{};
        for (std::size_t d = 0; d < 4; ++d)
        {
            const auto &ax = axes_[d];
            if (ax.size() == 1)
                continue; // a single node covers the whole dimension
            if (q[d] < ax.front() || q[d] > ax.back())
                return sigma0_;
            std::size_t i = static_cast<std::size_t>(std::upper_bound(ax.begin(), ax.end(), q[d]) - ax.begin());
            i = std::clamp<std::size_t>(i, 1, ax.size() - 1) - 1;
            lo[d] = i;
            frac[d] = (q[d] - ax[i]) / (ax[i + 1] - ax[i]);
            if (interp_ == RcsInterpolation::Nearest)
            {
                if (frac[d] > 0.5)
                    lo[d] = i + 1;
                frac[d] = 0.0;
            }
        }

        double acc = 0.0;
        for (unsigned corner = 0; corner < 16; ++corner)
        {
            double w = 1.0;
            std::size_t flat = 0;
            for (std::size_t d = 0; d < 4; ++d)
            {
                const bool up = (corner >> d) & 1u;
                if (up && frac[d] == 0.0)
                {
                    w = 0.0;
                    break;
                }
                w *= up ? frac[d] : 1.0 - frac[d];
                flat = flat * axes_[d].size() + lo[d] + (up ? 1 : 0);
            }
            if (w != 0.0)
                acc += w * values_[flat];
        }
        return acc;
    }

    double rcs_lookup(const RcsTable &table, const Direction &gamma_in, const Direction &gamma_out)
    {
        return table.lookup(gamma_in.zenith_deg, gamma_in.azimuth_deg, gamma_out.zenith_deg, gamma_out.azimuth_deg);
    }

    namespace
    {
        PathComponent straight_hop(const Vec3 &from, const Vec3 &to, const Vec3 &v_from, const Vec3 &v_to,
                                   double wavelength_m, double t_s)
        {
            const double d = (to - from).norm();
            if (!(d > 0.0))
                throw GeometryError("sensing target coincides with an antenna");
            PathComponent p;
            p.origin = Origin::TargetNonCoupled;
            const auto [aod, zod] = direction_angles(to - from);
            const auto [aoa, zoa] = direction_angles(from - to);
            p.aod_deg = aod;
            p.zod_deg = zod;
            p.aoa_deg = aoa;
            p.zoa_deg = zoa;
            p.delay_s = d / speed_of_light;
            p.doppler_hz = hop_doppler(from, to, v_from, v_to, wavelength_m);
            p.amplitude = std::polar(1.0, 2.0 * pi * p.doppler_hz * t_s);
            return p;
        }
    }

    HalfLink direct_tx_leg(const AntennaConfig &tx, int st_id, const Vec3 &st_pos, const Vec3 &st_vel,
                           double wavelength_m, double t_s)
    {
        PathComponent p = straight_hop(tx.location_m, st_pos, tx.velocity_mps, st_vel, wavelength_m, t_s);
        const double d = p.delay_s * speed_of_light;
        p.amplitude *= antenna_gain(tx, p.aod_deg, p.zod_deg) / (std::sqrt(4.0 * pi) * d);
        HalfLink leg;
        leg.st_id = st_id;
        leg.timestamp_s = t_s;
        leg.paths.push_back(p);
        return leg;
    }

    HalfLink direct_rx_leg(const AntennaConfig &rx, int st_id, const Vec3 &st_pos, const Vec3 &st_vel,
                           double wavelength_m, double t_s)
    {
        PathComponent p = straight_hop(st_pos, rx.location_m, st_vel, rx.velocity_mps, wavelength_m, t_s);
        const double d = p.delay_s * speed_of_light;
        p.amplitude *= wavelength_m * antenna_gain(rx, p.aoa_deg, p.zoa_deg) / (4.0 * pi * d);
        HalfLink leg;
        leg.st_id = st_id;
        leg.timestamp_s = t_s;
        leg.paths.push_back(p);
        return leg;
    }

    ChannelRealization concatenate_links(const HalfLink &tx_st, const HalfLink &st_rx, const RcsTable &table,
                                         std::uint64_t seed, std::size_t top_k)
    {
        if (tx_st.st_id != st_rx.st_id)
            throw CompositionError("half-links reference different targets (" + std::to_string(tx_st.st_id) +
                                   " vs " + std::to_string(st_rx.st_id) + ")");
        if (tx_st.timestamp_s != st_rx.timestamp_s)
            throw CompositionError("half-links carry different timestamps");

        ChannelRealization out;
        out.state = ChannelState::WithTarget;
        out.kind = ChannelKind::TargetNonCoupled;
        out.tx_antenna_id = tx_st.antenna_id;
        out.rx_antenna_id = st_rx.antenna_id;
        out.timestamp_s = tx_st.timestamp_s;

        const auto n_rx = static_cast<std::uint64_t>(st_rx.paths.size());
        for (std::size_t i = 0; i < tx_st.paths.size(); ++i)
        {
            const auto &a = tx_st.paths[i];
            for (std::size_t j = 0; j < st_rx.paths.size(); ++j)
            {
                const auto &b = st_rx.paths[j];
                const double sigma = table.lookup(a.zoa_deg, a.aoa_deg, b.zod_deg, b.aod_deg);
                Rng rng(seed, "target.phase", static_cast<std::uint64_t>(tx_st.st_id), i * n_rx + j);

                PathComponent p;
                p.cluster_index = tx_st.st_id;
                p.origin = Origin::TargetNonCoupled;
                p.initial_phase_rad = rng.phase();
                p.amplitude = a.amplitude * b.amplitude * std::sqrt(sigma) * std::polar(1.0, p.initial_phase_rad);
                if (p.amplitude == cdouble{0.0, 0.0})
                    continue;
                p.delay_s = a.delay_s + b.delay_s;
                p.doppler_hz = a.doppler_hz + b.doppler_hz;
                p.aod_deg = a.aod_deg;
                p.zod_deg = a.zod_deg;
                p.aoa_deg = b.aoa_deg;
                p.zoa_deg = b.zoa_deg;
                p.xpr = a.xpr ? a.xpr : b.xpr;
                out.paths.push_back(p);
            }
        }

        if (top_k > 0 && out.paths.size() > top_k)
        {
            std::vector<std::size_t> order(out.paths.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return out.paths[x].power() > out.paths[y].power();
            });
            order.resize(top_k);
            std::sort(order.begin(), order.end());
            std::vector<PathComponent> kept;
            kept.reserve(top_k);
            for (const auto k : order)
                kept.push_back(out.paths[k]);
            out.paths = std::move(kept);
        }
        for (std::size_t k = 0; k < out.paths.size(); ++k)
            out.paths[k].path_index = static_cast<int>(k + 1);
        return out;
    }

    ChannelRealization assemble_isac_channel(const ChannelRealization &bac, const ChannelRealization &tar1,
                                             const ChannelRealization &tar2)
    {
        for (const auto *r : {&tar1, &tar2})
        {
            if (r->tx_antenna_id != bac.tx_antenna_id || r->rx_antenna_id != bac.rx_antenna_id)
                throw CompositionError("sub-channels belong to different antenna pairs");
            if (r->timestamp_s != bac.timestamp_s)
                throw CompositionError("sub-channels carry different timestamps");
        }

        ChannelRealization out;
        out.state = ChannelState::WithTarget;
        out.kind = ChannelKind::Sensing;
        out.tx_antenna_id = bac.tx_antenna_id;
        out.rx_antenna_id = bac.rx_antenna_id;
        out.timestamp_s = bac.timestamp_s;
        out.paths.reserve(bac.paths.size() + tar1.paths.size() + tar2.paths.size());
        for (const auto *r : {&bac, &tar1, &tar2})
            out.paths.insert(out.paths.end(), r->paths.begin(), r->paths.end());
        return out;
    }
}
