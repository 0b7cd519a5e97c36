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

#include "isac/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "isac/error.hpp"

namespace isac
{
    std::string_view to_string(Origin origin)
    {
        switch (origin)
        {
        case Origin::Environment:
            return "env";
        case Origin::TargetCoupled:
            return "coupled";
        case Origin::TargetNonCoupled:
            return "noncoupled";
        }
        return "env";
    }

    std::string_view to_string(ChannelKind kind)
    {
        switch (kind)
        {
        case ChannelKind::Environment:
            return "environment";
        case ChannelKind::Background:
            return "background";
        case ChannelKind::TargetCoupled:
            return "target_coupled";
        case ChannelKind::TargetNonCoupled:
            return "target_noncoupled";
        case ChannelKind::Sensing:
            return "sensing";
        }
        return "environment";
    }

    Origin origin_from_string(std::string_view text)
    {
        if (text == "env" || text == "environment")
            return Origin::Environment;
        if (text == "coupled" || text == "target_coupled")
            return Origin::TargetCoupled;
        if (text == "noncoupled" || text == "target_noncoupled")
            return Origin::TargetNonCoupled;
        throw ConfigError("unknown path origin '" + std::string(text) + "'", "E_ORIGIN");
    }

    void validate_path(const PathComponent &p)
    {
        const auto where = "path (" + std::to_string(p.cluster_index) + "," + std::to_string(p.path_index) + "): ";
        if (p.cluster_index < 1 || p.path_index < 1)
            throw ConfigError(where + "cluster and path indices start at 1", "E_PATH_INDEX");
        if (!(p.delay_s >= 0.0) || !std::isfinite(p.delay_s))
            throw ConfigError(where + "delay must be finite and >= 0", "E_PATH_DELAY");
        if (!(p.aod_deg >= 0.0 && p.aod_deg < 360.0) || !(p.aoa_deg >= 0.0 && p.aoa_deg < 360.0))
            throw ConfigError(where + "azimuth angles must lie in [0, 360)", "E_PATH_ANGLE");
        if (!(p.zod_deg >= 0.0 && p.zod_deg <= 180.0) || !(p.zoa_deg >= 0.0 && p.zoa_deg <= 180.0))
            throw ConfigError(where + "zenith angles must lie in [0, 180]", "E_PATH_ANGLE");
        if (!(p.initial_phase_rad >= 0.0 && p.initial_phase_rad < 2.0 * pi))
            throw ConfigError(where + "initial phase must lie in [0, 2pi)", "E_PATH_PHASE");
        if (!std::isfinite(p.amplitude.real()) || !std::isfinite(p.amplitude.imag()))
            throw ConfigError(where + "amplitude must be finite", "E_PATH_AMPLITUDE");
    }

    void ChannelRealization::validate() const
    {
        std::set<std::tuple<int, int, Origin>> seen;
        for (const auto &p : paths)
        {
            validate_path(p);
            if (!seen.emplace(p.cluster_index, p.path_index, p.origin).second)
                throw ConfigError("duplicate path (" + std::to_string(p.cluster_index) + "," +
                                      std::to_string(p.path_index) + "," + std::string(to_string(p.origin)) + ")",
                                  "E_PATH_DUPLICATE");
        }
    }

    std::vector<double> uniform_axis(double start, double stop, double step)
    {
        if (!(step > 0.0) || !(stop >= start))
            throw ConfigError("axis needs step > 0 and stop >= start", "E_AXIS");
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-6)) + 1;
        std::vector<double> axis(n);
        for (std::size_t i = 0; i < n; ++i)
            axis[i] = start + static_cast<double>(i) * step;
        return axis;
    }

    namespace
    {
        void check_axis(const std::vector<double> &axis, const char *name)
        {
            if (axis.empty())
                throw ConfigError(std::string(name) + " axis is empty", "E_AXIS");
            for (std::size_t i = 1; i < axis.size(); ++i)
                if (!(axis[i] > axis[i - 1]))
                    throw ConfigError(std::string(name) + " axis must be strictly increasing", "E_AXIS");
        }
    }

    PadpGrid::PadpGrid(std::vector<double> angle_axis_deg, std::vector<double> delay_axis_s)
        : angle_axis_(std::move(angle_axis_deg)), delay_axis_(std::move(delay_axis_s))
    {
        check_axis(angle_axis_, "angle");
        check_axis(delay_axis_, "delay");
        power_.assign(angle_axis_.size() * delay_axis_.size(), 0.0);
    }

    PadpGrid::PadpGrid(std::vector<double> angle_axis_deg, std::vector<double> delay_axis_s,
                       std::vector<double> power)
        : PadpGrid(std::move(angle_axis_deg), std::move(delay_axis_s))
    {
        if (power.size() != power_.size())
            throw DimensionError("PADP body has " + std::to_string(power.size()) + " values, expected " +
                                 std::to_string(power_.size()));
        for (const double v : power)
            if (!(v >= 0.0))
                throw ConfigError("PADP power entries must be >= 0", "E_PADP_NEGATIVE");
        power_ = std::move(power);
    }

    double PadpGrid::total() const
    {
        double s = 0.0;
        for (const double v : power_)
            s += v;
        return s;
    }

    bool PadpGrid::same_axes(const PadpGrid &other) const
    {
        return angle_axis_ == other.angle_axis_ && delay_axis_ == other.delay_axis_;
    }

    std::optional<std::size_t> nearest_bin(std::span<const double> axis, double value)
    {
        const std::size_t n = axis.size();
        if (n == 0 || !std::isfinite(value))
            return std::nullopt;
        if (n == 1)
            return 0;
        const double lo_edge = axis[0] - 0.5 * (axis[1] - axis[0]);
        const double hi_edge = axis[n - 1] + 0.5 * (axis[n - 1] - axis[n - 2]);
        if (value < lo_edge || value > hi_edge)
            return std::nullopt;

        const auto it = std::lower_bound(axis.begin(), axis.end(), value);
        if (it == axis.begin())
            return 0;
        if (it == axis.end())
            return n - 1;
        const auto hi = static_cast<std::size_t>(it - axis.begin());
        const double d_lo = value - axis[hi - 1];
        const double d_hi = axis[hi] - value;
        return d_hi < d_lo ? hi : hi - 1;
    }

    PadpGrid padp_from_realization(const ChannelRealization &real,
                                   std::span<const double> angle_axis_deg,
                                   std::span<const double> delay_axis_s,
                                   OutOfRange policy)
    {
        PadpGrid grid({angle_axis_deg.begin(), angle_axis_deg.end()},
                      {delay_axis_s.begin(), delay_axis_s.end()});
        std::vector<cdouble> field(grid.angles() * grid.delays(), cdouble{0.0, 0.0});

        for (const auto &p : real.paths)
        {
            auto ia = nearest_bin(angle_axis_deg, p.aod_deg);
            auto id = nearest_bin(delay_axis_s, p.delay_s);
            if (!ia || !id)
            {
                if (policy == OutOfRange::Strict)
                    throw RangeError("path (" + std::to_string(p.cluster_index) + "," +
                                     std::to_string(p.path_index) + ") at AoD " + std::to_string(p.aod_deg) +
                                     " deg, delay " + std::to_string(p.delay_s) + " s lies outside the grid");
                if (policy == OutOfRange::Drop)
                    continue;
                if (!ia)
                    ia = p.aod_deg < angle_axis_deg.front() ? 0 : grid.angles() - 1;
                if (!id)
                    id = p.delay_s < delay_axis_s.front() ? 0 : grid.delays() - 1;
            }
            field[*ia * grid.delays() + *id] += p.amplitude;
        }

        for (std::size_t a = 0; a < grid.angles(); ++a)
            for (std::size_t d = 0; d < grid.delays(); ++d)
                grid.at(a, d) = std::norm(field[a * grid.delays() + d]);
        return grid;
    }

    std::vector<double> pas_slice(const PadpGrid &grid, double delay_lo_s, double delay_hi_s)
    {
        if (!(delay_lo_s < delay_hi_s))
            throw ConfigError("PAS window needs delay_lo < delay_hi", "E_WINDOW");
        std::vector<double> pas(grid.angles(), 0.0);
        const auto &delays = grid.delay_axis();
        for (std::size_t a = 0; a < grid.angles(); ++a)
            for (std::size_t d = 0; d < grid.delays(); ++d)
                if (delays[d] >= delay_lo_s && delays[d] <= delay_hi_s)
                    pas[a] += grid.at(a, d);
        return pas;
    }

    std::vector<double> angle_marginal(const PadpGrid &grid)
    {
        std::vector<double> m(grid.angles(), 0.0);
        for (std::size_t a = 0; a < grid.angles(); ++a)
            for (std::size_t d = 0; d < grid.delays(); ++d)
                m[a] += grid.at(a, d);
        return m;
    }

    std::vector<double> delay_marginal(const PadpGrid &grid)
    {
        std::vector<double> m(grid.delays(), 0.0);
        for (std::size_t a = 0; a < grid.angles(); ++a)
            for (std::size_t d = 0; d < grid.delays(); ++d)
                m[d] += grid.at(a, d);
        return m;
    }

    std::vector<double> to_db(std::span<const double> power, double floor_db)
    {
        double peak = 0.0;
        for (const double v : power)
            peak = std::max(peak, v);
        std::vector<double> out(power.size(), floor_db);
        if (peak <= 0.0)
            return out;
        const double floor_lin = peak * std::pow(10.0, floor_db / 10.0);
        for (std::size_t i = 0; i < power.size(); ++i)
            out[i] = 10.0 * std::log10(std::max(power[i], floor_lin));
        return out;
    }

    bool Region::contains(double az_deg, double delay_s) const
    {
        if (az_lo_deg && az_deg < *az_lo_deg)
            return false;
        if (az_hi_deg && az_deg > *az_hi_deg)
            return false;
        if (delay_lo_s && delay_s < *delay_lo_s)
            return false;
        if (delay_hi_s && delay_s > *delay_hi_s)
            return false;
        return true;
    }

    double total_power(const ChannelRealization &real, const std::optional<Region> &region)
    {
        double s = 0.0;
        for (const auto &p : real.paths)
            if (!region || region->contains(p.aod_deg, p.delay_s))
                s += p.power();
        return s;
    }

    double total_power(const PadpGrid &grid, const std::optional<Region> &region)
    {
        if (!region)
            return grid.total();
        double s = 0.0;
        for (std::size_t a = 0; a < grid.angles(); ++a)
            for (std::size_t d = 0; d < grid.delays(); ++d)
                if (region->contains(grid.angle_axis()[a], grid.delay_axis()[d]))
                    s += grid.at(a, d);
        return s;
    }

    ChannelRealization truncate_range(const ChannelRealization &real, double max_range_m)
    {
        ChannelRealization out = real;
        out.paths.clear();
        for (const auto &p : real.paths)
            if (p.delay_s * speed_of_light <= max_range_m)
                out.paths.push_back(p);
        return out;
    }
}
