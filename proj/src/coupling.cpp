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

#include "isac/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isac/error.hpp"
#include "isac/rng.hpp"

namespace isac
{
    void SensingTarget::validate() const
    {
        for (const double e : {w1_m, w2_m, h1_m, h2_m})
            if (!(e >= 0.0) || !std::isfinite(e))
                throw ConfigError("target " + std::to_string(id) + ": extents must be finite and >= 0", "E_ST_EXTENT");
        if (!(w1_m + w2_m > 0.0) || !(h1_m + h2_m > 0.0))
            throw ConfigError("target " + std::to_string(id) + ": width and height must be > 0", "E_ST_EXTENT");
    }

    bool BlockageRegion::contains(double aod_deg, double delay_s) const
    {
        if (delay_s < delay_min_s - br_delay_tolerance_s)
            return false;
        const double width = width_deg();
        if (width >= 360.0)
            return true;
        double rel = std::fmod(aod_deg - az_lo_deg, 360.0);
        if (rel < 0.0)
            rel += 360.0;
        return rel < width;
    }

    BlockageRegion blockage_region(const SensingTarget &st, const AntennaConfig &tx, const AntennaConfig &rx,
                                   double kappa)
    {
        st.validate();
        if (!(kappa >= 0.0) || !std::isfinite(kappa))
            throw ConfigError("br_margin_kappa must be finite and >= 0", "E_BR_KAPPA");
        const Vec3 to_st = st.position_m - tx.location_m;
        const double d_tx = to_st.norm();
        const double d_rx = (rx.location_m - st.position_m).norm();
        if (d_tx == 0.0 || d_rx == 0.0)
            throw GeometryError("sensing target " + std::to_string(st.id) + " coincides with an antenna");
        const double d_h = std::hypot(to_st.x, to_st.y);
        if (d_h == 0.0)
            throw GeometryError("sensing target " + std::to_string(st.id) + " lies on the Tx vertical");

        const double center = direction_angles(to_st)[0];
        // w2 lies to the right seen from the Tx, i.e. towards lower azimuth
        const double right = rad2deg(std::atan(st.w2_m / d_h));
        const double left = rad2deg(std::atan(st.w1_m / d_h));
        const double margin = kappa * tx.az_hpbw_deg;

        BlockageRegion br;
        br.az_lo_deg = center - right - margin;
        br.az_hi_deg = center + left + margin;
        br.delay_min_s = (d_tx + d_rx) / speed_of_light;
        return br;
    }

    CouplingFactors::CouplingFactors(CouplingLevel level, std::vector<PathKey> keys, std::vector<std::uint8_t> br_cf)
        : CouplingFactors(level, std::move(keys), std::move(br_cf), {})
    {
    }

    CouplingFactors::CouplingFactors(CouplingLevel level, std::vector<PathKey> keys, std::vector<std::uint8_t> br_cf,
                                     std::vector<double> fs_cf_lin)
        : level_(level), keys_(std::move(keys)), br_(std::move(br_cf)), fs_(std::move(fs_cf_lin))
    {
        if (fs_.empty())
            fs_.assign(keys_.size(), 0.0);
        if (br_.size() != keys_.size() || fs_.size() != keys_.size())
            throw DimensionError("coupling vectors differ in length");
        for (std::size_t i = 0; i < keys_.size(); ++i)
        {
            if (br_[i] > 1)
                throw ConfigError("br_cf entries must be 0 or 1", "E_BR_CF");
            const double v = fs_[i];
            fs_[i] = 0.0;
            set_fs_cf(i, v);
            if (!index_.emplace(keys_[i], i).second)
                throw ConfigError("duplicate coupling key (" + std::to_string(keys_[i].cluster) + ", " +
                                      std::to_string(keys_[i].path) + ")",
                                  "E_COUPLING_KEY");
        }
    }

    void CouplingFactors::set_fs_cf(std::size_t i, double value_lin)
    {
        if (i >= fs_.size())
            throw DimensionError("coupling index out of range");
        if (!(value_lin >= 0.0) || !std::isfinite(value_lin))
            throw ConfigError("fs_cf must be finite and >= 0", "E_FS_CF");
        if (value_lin > 0.0 && br_[i] == 1)
            throw ConfigError("fs_cf > 0 where br_cf = 1 (cluster " + std::to_string(keys_[i].cluster) +
                                  ", path " + std::to_string(keys_[i].path) + ")",
                              "E_FS_GATING");
        fs_[i] = value_lin;
    }

    std::size_t CouplingFactors::index_of(const PathComponent &path) const
    {
        const PathKey key{path.cluster_index, level_ == CouplingLevel::PerCluster ? 0 : path.path_index};
        const auto it = index_.find(key);
        if (it == index_.end())
            throw DimensionError("no coupling entry for cluster " + std::to_string(path.cluster_index) +
                                 ", path " + std::to_string(path.path_index));
        return it->second;
    }

    double CouplingFactors::fs_cf_db(std::size_t i) const
    {
        return 10.0 * std::log10(fs_.at(i));
    }

    std::size_t CouplingFactors::blocked_count() const
    {
        return static_cast<std::size_t>(std::count(br_.begin(), br_.end(), std::uint8_t{0}));
    }

    CouplingFactors compute_br_cf(const ChannelRealization &env, const BlockageRegion &br, CouplingLevel level,
                                  bool majority)
    {
        std::vector<PathKey> keys;
        std::vector<std::uint8_t> b;
        if (level == CouplingLevel::PerPath)
        {
            for (const auto &p : env.paths)
            {
                keys.push_back({p.cluster_index, p.path_index});
                b.push_back(br.contains(p.aod_deg, p.delay_s) ? 0 : 1);
            }
            return {level, std::move(keys), std::move(b)};
        }

        std::map<int, std::pair<std::size_t, std::size_t>> counts; // cluster -> (inside, total)
        for (const auto &p : env.paths)
        {
            auto [it, fresh] = counts.try_emplace(p.cluster_index, 0, 0);
            if (fresh)
                keys.push_back({p.cluster_index, 0});
            it->second.second += 1;
            if (br.contains(p.aod_deg, p.delay_s))
                it->second.first += 1;
        }
        for (const auto &k : keys)
        {
            const auto [inside, total] = counts.at(k.cluster);
            const bool blocked = majority ? 2 * inside > total : inside > 0;
            b.push_back(blocked ? 0 : 1);
        }
        return {level, std::move(keys), std::move(b)};
    }

    namespace
    {
        std::string path_label(const PathComponent &p)
        {
            return "cluster " + std::to_string(p.cluster_index) + ", path " + std::to_string(p.path_index);
        }

        double fs_cf_of_path(const PathComponent &p, const SensingTarget &st, const AntennaConfig &tx,
                             const AntennaConfig &rx, double wavelength_m)
        {
            const double length = p.delay_s * speed_of_light;
            const auto g = equivalent_translation(tx.location_m, p.aod_deg, p.zod_deg, length, st.screen(),
                                                  wavelength_m);
            const auto [back_az, back_zen] = direction_angles(g.link.l1_pos_m - g.link.l2_pos_m);
            const auto gains = edge_gains(g.link, g.screen, steer(tx, p.aod_deg, p.zod_deg),
                                          steer(rx, back_az, back_zen));
            const double a_db = fourkedg_attenuation(g.link, g.screen, gains);
            return std::isinf(a_db) ? 0.0 : std::pow(10.0, -a_db / 10.0);
        }
    }

    CouplingFactors compute_fs_cf_los(const ChannelRealization &env, CouplingFactors factors,
                                      const SensingTarget &st, const AntennaConfig &tx,
                                      const AntennaConfig &rx, double wavelength_m)
    {
        st.validate();
        const bool per_cluster = factors.level() == CouplingLevel::PerCluster;
        std::vector<double> weighted(factors.size(), 0.0), weight(factors.size(), 0.0);

        for (const auto &p : env.paths)
        {
            const std::size_t i = factors.index_of(p);
            if (factors.br_cf()[i] == 1)
                continue;
            double value = 1.0;
            try
            {
                value = fs_cf_of_path(p, st, tx, rx, wavelength_m);
            }
            catch (const GeometryError &e)
            {
                // at cluster level, members the screen does not face count as unobstructed
                if (!per_cluster)
                    throw GeometryError(path_label(p) + ": " + e.what());
            }
            catch (const ConfigError &e)
            {
                throw ConfigError(path_label(p) + ": " + e.what(), e.code());
            }
            if (per_cluster)
            {
                weighted[i] += p.power() * value;
                weight[i] += p.power();
            }
            else
            {
                factors.set_fs_cf(i, value);
            }
        }
        if (per_cluster)
            for (std::size_t i = 0; i < factors.size(); ++i)
                if (factors.br_cf()[i] == 0)
                    factors.set_fs_cf(i, weight[i] > 0.0 ? weighted[i] / weight[i] : 0.0);
        return factors;
    }

    CouplingFactors sample_fs_cf_nlos(CouplingFactors factors, const NormalDb &dist, std::uint64_t seed)
    {
        if (!(dist.var_db2 >= 0.0) || !std::isfinite(dist.var_db2))
            throw ConfigError("NLoS FS-CF variance must be >= 0", "E_NLOS_VARIANCE");
        if (!std::isfinite(dist.mean_db))
            throw ConfigError("NLoS FS-CF mean must be finite", "E_NLOS_MEAN");
        const double sd = std::sqrt(dist.var_db2);
        for (std::size_t i = 0; i < factors.size(); ++i)
        {
            if (factors.br_cf()[i] == 1)
                continue;
            const auto &k = factors.keys()[i];
            Rng rng(seed, "coupling.nlos", static_cast<std::uint64_t>(k.cluster), static_cast<std::uint64_t>(k.path));
            const double g_db = rng.normal(dist.mean_db, sd);
            factors.set_fs_cf(i, std::pow(10.0, g_db / 10.0));
        }
        return factors;
    }

    namespace
    {
        void check_dimensions(const ChannelRealization &env, const CouplingFactors &factors)
        {
            std::size_t expected = env.paths.size();
            if (factors.level() == CouplingLevel::PerCluster)
            {
                std::vector<int> clusters;
                for (const auto &p : env.paths)
                    clusters.push_back(p.cluster_index);
                std::sort(clusters.begin(), clusters.end());
                expected = static_cast<std::size_t>(std::unique(clusters.begin(), clusters.end()) - clusters.begin());
            }
            if (factors.size() != expected)
                throw DimensionError("coupling vectors have " + std::to_string(factors.size()) +
                                     " entries, the environment needs " + std::to_string(expected));
        }

        ChannelRealization derived(const ChannelRealization &env, ChannelKind kind)
        {
            ChannelRealization out;
            out.state = ChannelState::WithTarget;
            out.kind = kind;
            out.tx_antenna_id = env.tx_antenna_id;
            out.rx_antenna_id = env.rx_antenna_id;
            out.timestamp_s = env.timestamp_s;
            return out;
        }
    }

    ChannelRealization background_channel(const ChannelRealization &env, const CouplingFactors &factors)
    {
        check_dimensions(env, factors);
        ChannelRealization out = derived(env, ChannelKind::Background);
        for (const auto &p : env.paths)
            if (factors.br_cf()[factors.index_of(p)] == 1)
                out.paths.push_back(p);
        return out;
    }

    ChannelRealization coupled_target_channel(const ChannelRealization &env, const CouplingFactors &factors)
    {
        check_dimensions(env, factors);
        ChannelRealization out = derived(env, ChannelKind::TargetCoupled);
        for (const auto &p : env.paths)
        {
            const std::size_t i = factors.index_of(p);
            if (factors.br_cf()[i] == 1 || factors.fs_cf_lin()[i] == 0.0)
                continue;
            PathComponent q = p;
            q.amplitude *= std::sqrt(factors.fs_cf_lin()[i]);
            q.origin = Origin::TargetCoupled;
            out.paths.push_back(q);
        }
        return out;
    }

    CouplingFactors combine_factors(std::span<const CouplingFactors> per_target)
    {
        if (per_target.empty())
            throw DimensionError("no coupling factors to combine");
        const auto &first = per_target.front();
        std::vector<std::uint8_t> b(first.size(), 1);
        std::vector<double> a(first.size(), 1.0);
        for (const auto &f : per_target)
        {
            if (f.level() != first.level() || f.keys() != first.keys())
                throw DimensionError("coupling factors of different targets do not share keys");
            for (std::size_t i = 0; i < f.size(); ++i)
                if (f.br_cf()[i] == 0)
                {
                    b[i] = 0;
                    a[i] *= f.fs_cf_lin()[i];
                }
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            if (b[i] == 1)
                a[i] = 0.0;
        return {first.level(), first.keys(), std::move(b), std::move(a)};
    }
}
