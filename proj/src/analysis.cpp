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

#include "isac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "isac/error.hpp"

namespace isac
{
    std::vector<std::optional<double>> extract_fs_cf(const PadpGrid &padp_e1, const PadpGrid &padp_e0,
                                                     double delay_lo_s, double delay_hi_s, double floor_db)
    {
        if (!padp_e1.same_axes(padp_e0))
            throw DimensionError("extract_fs_cf: PADP grids do not share axes");
        const auto p1 = pas_slice(padp_e1, delay_lo_s, delay_hi_s);
        const auto p0 = pas_slice(padp_e0, delay_lo_s, delay_hi_s);
        const double floor_lin = std::pow(10.0, floor_db / 10.0);

        std::vector<std::optional<double>> out(p0.size());
        for (std::size_t a = 0; a < p0.size(); ++a)
            if (p0[a] > floor_lin && p1[a] > 0.0)
                out[a] = 10.0 * std::log10(p1[a] / p0[a]);
        return out;
    }

    double similarity_index(std::span<const double> p, std::span<const double> q)
    {
        if (p.size() != q.size())
            throw DimensionError("similarity_index: distributions differ in size");
        double sp = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
        {
            if (!(p[i] >= 0.0) || !(q[i] >= 0.0))
                throw DataError("similarity_index: powers must be >= 0");
            sp += p[i];
            sq += q[i];
        }
        if (!(sp > 0.0) || !(sq > 0.0))
            throw DataError("similarity_index: all-zero distribution");
        double tv = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            tv += std::abs(p[i] / sp - q[i] / sq);
        return std::clamp(1.0 - 0.5 * tv, 0.0, 1.0);
    }

    double similarity_index(const PadpGrid &p_mea, const PadpGrid &p_model, SiDomain domain)
    {
        if (!p_mea.same_axes(p_model))
            throw DimensionError("similarity_index: PADP grids do not share axes");
        switch (domain)
        {
        case SiDomain::Angle:
            return similarity_index(angle_marginal(p_mea), angle_marginal(p_model));
        case SiDomain::Delay:
            return similarity_index(delay_marginal(p_mea), delay_marginal(p_model));
        case SiDomain::Joint:
            break;
        }
        return similarity_index(p_mea.values(), p_model.values());
    }

    SimilarityReport similarity_report(const PadpGrid &p_mea, const PadpGrid &p_model)
    {
        return {similarity_index(p_mea, p_model, SiDomain::Angle),
                similarity_index(p_mea, p_model, SiDomain::Delay),
                similarity_index(p_mea, p_model, SiDomain::Joint)};
    }

    double kolmogorov_sf(double x)
    {
        if (x <= 0.0)
            return 1.0;
        if (x < 1.0)
        {
            // Jacobi-theta form converges fast for small x
            double s = 0.0;
            for (int k = 1; k <= 20; ++k)
            {
                const double t = (2.0 * k - 1.0) * pi / x;
                s += std::exp(-t * t / 8.0);
            }
            return std::clamp(1.0 - std::sqrt(2.0 * pi) / x * s, 0.0, 1.0);
        }
        double s = 0.0;
        for (int k = 1; k <= 100; ++k)
        {
            const double term = std::exp(-2.0 * k * k * x * x);
            s += (k % 2 == 1 ? term : -term);
            if (term < 1e-18)
                break;
        }
        return std::clamp(2.0 * s, 0.0, 1.0);
    }

    KsResult ks_test(std::span<const double> samples, const std::function<double(double)> &cdf)
    {
        if (samples.empty())
            throw DataError("ks_test: no samples");
        std::vector<double> x(samples.begin(), samples.end());
        std::sort(x.begin(), x.end());
        const double n = static_cast<double>(x.size());
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double f = cdf(x[i]);
            d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
        }
        const double sn = std::sqrt(n);
        return {d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)};
    }

    NormalFit fit_normal(std::span<const double> samples_db)
    {
        if (samples_db.size() < 2)
            throw DataError("fit_normal: at least 2 samples are required");
        for (const double v : samples_db)
            if (!std::isfinite(v))
                throw DataError("fit_normal: non-finite sample");

        NormalFit fit;
        fit.sample_count = samples_db.size();
        const double n = static_cast<double>(samples_db.size());
        fit.mean_db = std::accumulate(samples_db.begin(), samples_db.end(), 0.0) / n;
        double ss = 0.0;
        for (const double v : samples_db)
            ss += (v - fit.mean_db) * (v - fit.mean_db);
        fit.var_db2 = ss / (n - 1.0);

        const auto [lo, hi] = std::minmax_element(samples_db.begin(), samples_db.end());
        if (*lo == *hi)
        {
            fit.mean_db = *lo;
            fit.var_db2 = 0.0;
            fit.degenerate = true;
            return fit;
        }
        const double mu = fit.mean_db, sd = std::sqrt(fit.var_db2);
        const auto ks = ks_test(samples_db, [&](double v) { return 0.5 * std::erfc(-(v - mu) / (sd * std::sqrt(2.0))); });
        fit.ks_statistic = ks.statistic;
        fit.ks_pvalue = ks.pvalue;
        return fit;
    }

    std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> samples)
    {
        std::vector<double> x(samples.begin(), samples.end());
        std::sort(x.begin(), x.end());
        std::vector<std::pair<double, double>> out;
        out.reserve(x.size());
        const double n = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            out.emplace_back(x[i], (static_cast<double>(i) + 1.0) / n);
        return out;
    }
}
