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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isac/geometry.hpp"

namespace isac
{
    using cdouble = std::complex<double>;

    /// e0: environment only. e1: a sensing target interacts with the propagation.
    enum class ChannelState
    {
        EnvOnly,
        WithTarget
    };

    enum class Origin
    {
        Environment,
        TargetCoupled,
        TargetNonCoupled
    };

    /// Which sub-channel a realization holds.
    enum class ChannelKind
    {
        Environment,
        Background,
        TargetCoupled,
        TargetNonCoupled,
        Sensing
    };

    std::string_view to_string(Origin origin);
    std::string_view to_string(ChannelKind kind);
    Origin origin_from_string(std::string_view text);

    /// One multipath component. Amplitude is the complex field coefficient with
    /// pattern, phase and Doppler terms already composed.
    struct PathComponent
    {
        int cluster_index = 1;
        int path_index = 1;
        cdouble amplitude{0.0, 0.0};
        double delay_s = 0.0;
        double aod_deg = 0.0;
        double zod_deg = 90.0;
        double aoa_deg = 0.0;
        double zoa_deg = 90.0;
        double doppler_hz = 0.0;
        double initial_phase_rad = 0.0;
        std::optional<double> xpr; // cross-polarization ratio, carried but never applied
        Origin origin = Origin::Environment;

        double power() const { return std::norm(amplitude); }

        /// Departure direction seen from the Tx (derived, never stored).
        Vec3 departure_unit() const { return unit_vector(aod_deg, zod_deg); }

        /// Arrival direction seen from the Rx, pointing back along the incoming wave.
        Vec3 arrival_unit() const { return unit_vector(aoa_deg, zoa_deg); }

        bool operator==(const PathComponent &) const = default;
    };

    /// Throws ConfigError if delay, angles or phase are out of their ranges.
    void validate_path(const PathComponent &path);

    struct ChannelRealization
    {
        ChannelState state = ChannelState::EnvOnly;
        ChannelKind kind = ChannelKind::Environment;
        int tx_antenna_id = 1;
        int rx_antenna_id = 1;
        double timestamp_s = 0.0;
        std::vector<PathComponent> paths;

        /// Checks every path and the uniqueness of (cluster, path, origin).
        void validate() const;

        bool operator==(const ChannelRealization &) const = default;
    };

    /// Strictly increasing grid `start, start+step, ...` up to `stop` (inclusive within step/1e6).
    std::vector<double> uniform_axis(double start, double stop, double step);

    /// Power-angle-delay profile: `power[a * delays + d]`, linear units.
    class PadpGrid
    {
    public:
        PadpGrid(std::vector<double> angle_axis_deg, std::vector<double> delay_axis_s);
        PadpGrid(std::vector<double> angle_axis_deg, std::vector<double> delay_axis_s,
                 std::vector<double> power);

        const std::vector<double> &angle_axis() const { return angle_axis_; }
        const std::vector<double> &delay_axis() const { return delay_axis_; }
        const std::vector<double> &values() const { return power_; }

        std::size_t angles() const { return angle_axis_.size(); }
        std::size_t delays() const { return delay_axis_.size(); }

        double at(std::size_t angle, std::size_t delay) const { return power_[angle * delays() + delay]; }
        double &at(std::size_t angle, std::size_t delay) { return power_[angle * delays() + delay]; }

        double total() const;
        bool same_axes(const PadpGrid &other) const;

        bool operator==(const PadpGrid &) const = default;

    private:
        std::vector<double> angle_axis_;
        std::vector<double> delay_axis_;
        std::vector<double> power_;
    };

    enum class OutOfRange
    {
        Strict, // throw RangeError
        Drop,   // ignore the path
        Clamp   // put the path into the nearest edge bin
    };

    /// Nearest axis index; ties go to the lower index. std::nullopt if `value`
    /// lies more than half a step outside the axis.
    std::optional<std::size_t> nearest_bin(std::span<const double> axis, double value);

    /// Bins each path on (AoD, delay); paths sharing a cell are summed as phasors.
    PadpGrid padp_from_realization(const ChannelRealization &real,
                                   std::span<const double> angle_axis_deg,
                                   std::span<const double> delay_axis_s,
                                   OutOfRange policy = OutOfRange::Strict);

    /// Per-angle power summed over delay bins with lo <= delay <= hi.
    std::vector<double> pas_slice(const PadpGrid &grid, double delay_lo_s, double delay_hi_s);

    std::vector<double> angle_marginal(const PadpGrid &grid);
    std::vector<double> delay_marginal(const PadpGrid &grid);

    /// Linear power to dB. Values below `floor_db` relative to the maximum are clamped.
    std::vector<double> to_db(std::span<const double> power, double floor_db = -120.0);

    /// Optional angle/delay window, bounds inclusive.
    struct Region
    {
        std::optional<double> az_lo_deg, az_hi_deg;
        std::optional<double> delay_lo_s, delay_hi_s;

        bool contains(double az_deg, double delay_s) const;
    };

    double total_power(const ChannelRealization &real, const std::optional<Region> &region = std::nullopt);
    double total_power(const PadpGrid &grid, const std::optional<Region> &region = std::nullopt);

    /// Drops paths whose propagation distance exceeds `max_range_m`.
    ChannelRealization truncate_range(const ChannelRealization &real, double max_range_m);
}
