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
#include <map>
#include <span>
#include <vector>

#include "isac/core.hpp"
#include "isac/diffraction.hpp"
#include "isac/gbsm.hpp"
#include "isac/target.hpp"

namespace isac
{
    /// Sensing target as an absorbing screen plus an RCS table. `position_m`
    /// is the screen reference point: h1 above it, h2 below, w1 to the left and
    /// w2 to the right seen from the Tx. The defaults describe the 0.7 m x 1.6 m
    /// AGV with its reference at antenna height.
    struct SensingTarget
    {
        int id = 1;
        Vec3 position_m{0.0, 4.0, 1.4};
        double w1_m = 0.35, w2_m = 0.35;
        double h1_m = 0.2, h2_m = 1.4;
        Vec3 velocity_mps{};
        RcsTable rcs = RcsTable::isotropic(1.0);

        ScreenGeometry screen() const { return {position_m, w1_m, w2_m, h1_m, h2_m}; }
        void validate() const;
    };

    /// Margin rule of the Blockage Region: half-width = angular half-size + kappa * HPBW.
    /// The default kappa turns a 6.7 deg target seen through an 8.5 deg horn into 40 deg.
    inline constexpr double default_br_kappa = (20.0 - 3.35) / 8.5;

    /// Angular sector seen from the Tx plus a delay onset. Azimuth membership is
    /// az_lo <= aod < az_hi (modulo 360), delay membership delay >= delay_min.
    struct BlockageRegion
    {
        double az_lo_deg = 0.0;
        double az_hi_deg = 0.0;
        double delay_min_s = 0.0;
        double beta0_deg = 180.0;

        double width_deg() const { return az_hi_deg - az_lo_deg; }
        bool contains(double aod_deg, double delay_s) const;
    };

    /// Tolerance applied to the delay onset so that a path grazing the target
    /// is not released by rounding.
    inline constexpr double br_delay_tolerance_s = 1e-12;

    BlockageRegion blockage_region(const SensingTarget &st, const AntennaConfig &tx, const AntennaConfig &rx,
                                   double kappa = default_br_kappa);

    enum class CouplingLevel
    {
        PerPath,
        PerCluster
    };

    /// (cluster, path) index; path is 0 for cluster-level entries.
    struct PathKey
    {
        int cluster = 1;
        int path = 0;
        auto operator<=>(const PathKey &) const = default;
    };

    /// BR-CF (B) and FS-CF (A, linear power ratio) vectors. A may only be
    /// positive where B = 0.
    class CouplingFactors
    {
    public:
        CouplingFactors() = default;
        CouplingFactors(CouplingLevel level, std::vector<PathKey> keys, std::vector<std::uint8_t> br_cf);
        CouplingFactors(CouplingLevel level, std::vector<PathKey> keys, std::vector<std::uint8_t> br_cf,
                        std::vector<double> fs_cf_lin);

        CouplingLevel level() const { return level_; }
        std::size_t size() const { return keys_.size(); }
        const std::vector<PathKey> &keys() const { return keys_; }
        const std::vector<std::uint8_t> &br_cf() const { return br_; }
        const std::vector<double> &fs_cf_lin() const { return fs_; }

        /// Throws ConfigError for a negative value or a positive value where B = 1.
        void set_fs_cf(std::size_t i, double value_lin);

        /// Index of the entry governing `path`, or throws DimensionError.
        std::size_t index_of(const PathComponent &path) const;

        double fs_cf_db(std::size_t i) const;
        std::size_t blocked_count() const;

        bool operator==(const CouplingFactors &) const = default;

    private:
        CouplingLevel level_ = CouplingLevel::PerPath;
        std::vector<PathKey> keys_;
        std::vector<std::uint8_t> br_;
        std::vector<double> fs_;
        std::map<PathKey, std::size_t> index_;
    };

    /// B per path, or per cluster when any member path (or a strict majority,
    /// with `majority`) falls in the region.
    CouplingFactors compute_br_cf(const ChannelRealization &env, const BlockageRegion &br,
                                  CouplingLevel level = CouplingLevel::PerPath, bool majority = false);

    /// FS-CF from 4KED-G at each blocked path's geometry. The Tx horn is steered
    /// along the path, the Rx pattern along its arrival back-direction. At
    /// cluster level the power-weighted mean of the member values is used.
    CouplingFactors compute_fs_cf_los(const ChannelRealization &env, CouplingFactors factors,
                                      const SensingTarget &st, const AntennaConfig &tx,
                                      const AntennaConfig &rx, double wavelength_m);

    struct NormalDb
    {
        double mean_db = 0.066;
        double var_db2 = 0.253;
    };

    /// One draw of Normal(mean, var) in dB per blocked entry, keyed on (seed, cluster, path).
    CouplingFactors sample_fs_cf_nlos(CouplingFactors factors, const NormalDb &dist, std::uint64_t seed);

    /// Environment paths with B = 1.
    ChannelRealization background_channel(const ChannelRealization &env, const CouplingFactors &factors);

    /// Environment paths with B = 0, amplitudes scaled by sqrt(FS-CF), zero-power results dropped.
    ChannelRealization coupled_target_channel(const ChannelRealization &env, const CouplingFactors &factors);

    /// Several targets: B combined by AND, FS-CF multiplied over the targets that block a path.
    CouplingFactors combine_factors(std::span<const CouplingFactors> per_target);
}
