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

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "isac/core.hpp"

namespace isac
{
    /// Per-angle coupling factor in dB measured between a state-e1 and a
    /// state-e0 PADP over lo <= delay <= hi. Angles whose e0 power is at or
    /// below `floor_db` (absolute, 10 log10 of linear power), or whose e1 power
    /// is zero, are std::nullopt.
    std::vector<std::optional<double>> extract_fs_cf(const PadpGrid &padp_e1, const PadpGrid &padp_e0,
                                                     double delay_lo_s, double delay_hi_s,
                                                     double floor_db = -300.0);

    enum class SiDomain
    {
        Angle,
        Delay,
        Joint
    };

    struct SimilarityReport
    {
        double si_angle = 0.0;
        double si_delay = 0.0;
        double si_joint = 0.0;
    };

    /// 1 - (1/2) sum |p/sum p - q/sum q| over linear powers, clamped to [0, 1].
    double similarity_index(std::span<const double> p, std::span<const double> q);

    double similarity_index(const PadpGrid &p_mea, const PadpGrid &p_model, SiDomain domain);
    SimilarityReport similarity_report(const PadpGrid &p_mea, const PadpGrid &p_model);

    struct KsResult
    {
        double statistic = 0.0;
        double pvalue = 1.0;
    };

    /// Survival function of the Kolmogorov distribution, P(K > x).
    double kolmogorov_sf(double x);

    /// One-sample Kolmogorov-Smirnov test against `cdf`; the p-value uses the
    /// Stephens small-sample correction of the statistic.
    KsResult ks_test(std::span<const double> samples, const std::function<double(double)> &cdf);

    struct NormalFit
    {
        double mean_db = 0.0;
        double var_db2 = 0.0;
        std::size_t sample_count = 0;
        double ks_statistic = 0.0;
        std::optional<double> ks_pvalue; // empty when the fit is degenerate
        bool degenerate = false;
    };

    /// Sample mean, unbiased variance and KS test against the fitted normal.
    NormalFit fit_normal(std::span<const double> samples_db);

    /// Sorted (value, F) pairs with F = i/n.
    std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> samples);
}
