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

#include "isac/diffraction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "isac/error.hpp"

namespace isac
{
    void LinkGeometry::validate() const
    {
        if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m))
            throw ConfigError("wavelength must be > 0", "E_WAVELENGTH");
        if (!(length() > 0.0))
            throw GeometryError("link nodes L1 and L2 coincide");
    }

    void ScreenGeometry::validate() const
    {
        for (const double e : {w1_m, w2_m, h1_m, h2_m})
            if (!(e >= 0.0))
                throw ConfigError("screen extents must be >= 0", "E_SCREEN");
    }

    ScreenFrame screen_frame(const LinkGeometry &link, const ScreenGeometry &screen)
    {
        link.validate();
        screen.validate();

        ScreenFrame f;
        const double len = link.length();
        f.e_link = (link.l2_pos_m - link.l1_pos_m) * (1.0 / len);
        Vec3 right = f.e_link.cross({0.0, 0.0, 1.0});
        if (right.norm() < 1e-12)
            right = {1.0, 0.0, 0.0};
        f.e_right = right.normalized();
        f.e_up = f.e_right.cross(f.e_link);

        const Vec3 rel = screen.center_m - link.l1_pos_m;
        f.r0 = rel.dot(f.e_link);
        f.s0 = len - f.r0;
        if (!(f.r0 > 0.0) || !(f.s0 > 0.0))
            throw GeometryError("screen does not lie between the link nodes (r0 = " + std::to_string(f.r0) +
                                " m, s0 = " + std::to_string(f.s0) + " m)");
        f.origin = link.l1_pos_m + f.e_link * f.r0;

        const double xc = rel.dot(f.e_right);
        const double yc = rel.dot(f.e_up);
        f.x_lo = xc - screen.w1_m;
        f.x_hi = xc + screen.w2_m;
        f.y_lo = yc - screen.h2_m;
        f.y_hi = yc + screen.h1_m;
        return f;
    }

    double ked_edge_factor(const EdgeClearance &edge, double wavelength_m)
    {
        if (!(edge.r0 > 0.0) || !(edge.s0 > 0.0))
            throw GeometryError("knife edge with r0 <= 0 or s0 <= 0");
        if (!(wavelength_m > 0.0))
            throw ConfigError("wavelength must be > 0", "E_WAVELENGTH");
        if (std::isinf(edge.r) || std::isinf(edge.s))
            return edge.sign * 0.5;
        const double excess = std::max(0.0, edge.r + edge.s - edge.r0 - edge.s0);
        const double arg = edge.sign * (pi / 2.0) * std::sqrt(pi / wavelength_m * excess);
        return std::atan(arg) / pi;
    }

    namespace
    {
        // Excess path r + s - r0 - s0 for an in-plane offset rho, without cancellation.
        double excess_path(double r0, double s0, double rho2)
        {
            return rho2 / (std::sqrt(r0 * r0 + rho2) + r0) + rho2 / (std::sqrt(s0 * s0 + rho2) + s0);
        }

        struct DimensionEdges
        {
            double f_lo, f_hi;
            int sign_lo, sign_hi;
        };

        // Knife-edge factors of the two edges bounding [lo, hi] relative to the ray at 0.
        DimensionEdges dimension_edges(double lo, double hi, double r0, double s0, double lambda)
        {
            int sign_lo = 1, sign_hi = 1;
            if (hi < 0.0)
                sign_hi = -1; // ray passes beyond the high edge
            else if (lo > 0.0)
                sign_lo = -1;

            auto factor = [&](double c, int sign) {
                EdgeClearance e;
                e.r0 = r0;
                e.s0 = s0;
                e.sign = sign;
                if (std::isinf(c))
                {
                    e.r = e.s = std::numeric_limits<double>::infinity();
                }
                else
                {
                    e.r = std::sqrt(r0 * r0 + c * c);
                    e.s = std::sqrt(s0 * s0 + c * c);
                }
                return ked_edge_factor(e, lambda);
            };
            return {factor(lo, sign_lo), factor(hi, sign_hi), sign_lo, sign_hi};
        }
    }

    EdgeFactors edge_factors(const LinkGeometry &link, const ScreenGeometry &screen)
    {
        const ScreenFrame fr = screen_frame(link, screen);
        const double lambda = link.wavelength_m;
        const auto h = dimension_edges(fr.y_lo, fr.y_hi, fr.r0, fr.s0, lambda);
        const auto w = dimension_edges(fr.x_lo, fr.x_hi, fr.r0, fr.s0, lambda);

        EdgeFactors out;
        out.f[EdgeH1] = h.f_hi;
        out.sign[EdgeH1] = h.sign_hi;
        out.offset_m[EdgeH1] = fr.y_hi;
        out.f[EdgeH2] = h.f_lo;
        out.sign[EdgeH2] = h.sign_lo;
        out.offset_m[EdgeH2] = fr.y_lo;
        out.f[EdgeW1] = w.f_lo;
        out.sign[EdgeW1] = w.sign_lo;
        out.offset_m[EdgeW1] = fr.x_lo;
        out.f[EdgeW2] = w.f_hi;
        out.sign[EdgeW2] = w.sign_hi;
        out.offset_m[EdgeW2] = fr.x_hi;
        return out;
    }

    namespace
    {
        double field_ratio_to_db(double ratio)
        {
            if (ratio <= 1e-15)
                return std::numeric_limits<double>::infinity();
            return -20.0 * std::log10(ratio);
        }
    }

    double fourked_attenuation(const LinkGeometry &link, const ScreenGeometry &screen)
    {
        const auto ef = edge_factors(link, screen);
        const double blocked = (ef.f[EdgeH1] + ef.f[EdgeH2]) * (ef.f[EdgeW1] + ef.f[EdgeW2]);
        return field_ratio_to_db(1.0 - blocked);
    }

    void EdgeGainSet::validate() const
    {
        for (std::size_t i = 0; i < 4; ++i)
            if (!(g_r[i] >= 0.0) || !(g_s[i] >= 0.0))
                throw ConfigError("edge gains must be >= 0", "E_EDGE_GAIN");
    }

    double fourkedg_attenuation(const LinkGeometry &link, const ScreenGeometry &screen,
                                const EdgeGainSet &gains)
    {
        gains.validate();
        const auto ef = edge_factors(link, screen);
        auto open = [&](Edge e) {
            return (0.5 - ef.f[e]) * std::sqrt(gains.g_r[e]) * std::sqrt(gains.g_s[e]);
        };
        const double x_h = open(EdgeH1) + open(EdgeH2);
        const double x_w = open(EdgeW1) + open(EdgeW2);
        return field_ratio_to_db(1.0 - (1.0 - x_h) * (1.0 - x_w));
    }

    EdgeGainSet edge_gains(const LinkGeometry &link, const ScreenGeometry &screen,
                           const AntennaConfig &tx, const AntennaConfig &rx)
    {
        const ScreenFrame fr = screen_frame(link, screen);
        const auto ef = edge_factors(link, screen);

        const auto [ray_az_tx, ray_zen_tx] = direction_angles(link.l2_pos_m - link.l1_pos_m);
        const auto [ray_az_rx, ray_zen_rx] = direction_angles(link.l1_pos_m - link.l2_pos_m);

        EdgeGainSet g;
        for (const Edge e : {EdgeH1, EdgeH2, EdgeW1, EdgeW2})
        {
            const double c = ef.offset_m[e];
            if (std::isinf(c) || ef.sign[e] < 0)
                continue; // weight 1
            const bool horizontal_edge = (e == EdgeH1 || e == EdgeH2);
            const double x = horizontal_edge ? std::clamp(0.0, fr.x_lo, fr.x_hi) : c;
            const double y = horizontal_edge ? c : std::clamp(0.0, fr.y_lo, fr.y_hi);
            const Vec3 p = fr.to_world(x, y);

            const auto [az_t, zen_t] = direction_angles(p - link.l1_pos_m);
            const auto [az_r, zen_r] = direction_angles(p - link.l2_pos_m);
            const double ft = relative_antenna_gain(tx, az_t, zen_t, ray_az_tx, ray_zen_tx);
            const double fs = relative_antenna_gain(rx, az_r, zen_r, ray_az_rx, ray_zen_rx);
            g.g_r[e] = ft * ft;
            g.g_s[e] = fs * fs;
        }
        return g;
    }

    double DiffractionField::attenuation_db() const
    {
        return field_ratio_to_db(relative_magnitude());
    }

    namespace
    {
        constexpr int kGaussPoints = 16;

        struct GaussRule
        {
            std::array<double, kGaussPoints> x{}, w{};
        };

        // Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
        GaussRule make_gauss_rule()
        {
            GaussRule g;
            const int n = kGaussPoints;
            for (int i = 0; i < (n + 1) / 2; ++i)
            {
                double z = std::cos(pi * (i + 0.75) / (n + 0.5));
                double dp = 0.0;
                for (int it = 0; it < 100; ++it)
                {
                    double p0 = 1.0, p1 = 0.0;
                    for (int j = 1; j <= n; ++j)
                    {
                        const double p2 = p1;
                        p1 = p0;
                        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                    }
                    dp = n * (z * p0 - p1) / (z * z - 1.0);
                    const double dz = p0 / dp;
                    z -= dz;
                    if (std::abs(dz) < 1e-16)
                        break;
                }
                g.x[i] = -z;
                g.x[n - 1 - i] = z;
                g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
            }
            return g;
        }

        const GaussRule &gauss_rule()
        {
            static const GaussRule rule = make_gauss_rule();
            return rule;
        }

        // C-infinity step: 1 for t <= a, 0 for t >= b.
        double smooth_window(double t, double a, double b)
        {
            t = std::abs(t);
            if (t <= a)
                return 1.0;
            if (t >= b)
                return 0.0;
            const double u = (t - a) / (b - a);
            auto g = [](double v) { return v > 0.0 ? std::exp(-1.0 / v) : 0.0; };
            const double gl = g(1.0 - u), gr = g(u);
            return gl / (gl + gr);
        }

        struct AxisPlan
        {
            double taper_start = 0.0; // metres
            double taper_end = 0.0;
            std::vector<double> breaks; // sorted interval boundaries inside [-end, end]
        };

        AxisPlan plan_axis(double lo, double hi, double scale, double zone_nu)
        {
            double edge_nu = 0.0;
            for (const double c : {lo, hi})
                if (std::isfinite(c))
                    edge_nu = std::max(edge_nu, std::abs(c) * scale);

            AxisPlan p;
            const double start_nu = std::max(0.5 * zone_nu, edge_nu + 2.0);
            const double end_nu = start_nu + 0.5 * zone_nu;
            p.taper_start = start_nu / scale;
            p.taper_end = end_nu / scale;

            std::vector<double> b{-p.taper_end, -p.taper_start, 0.0, p.taper_start, p.taper_end};
            for (const double c : {lo, hi})
                if (std::isfinite(c) && std::abs(c) < p.taper_end)
                    b.push_back(c);
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end()), b.end());
            p.breaks = std::move(b);
            return p;
        }

        // Quadrature nodes/weights along one axis; panels are equal in phase
        // (scale*t)^2 * pi/2 increments and no wider than `max_width_nu`.
        void axis_nodes(double a, double b, double scale, double phase_step, double max_width_nu,
                        std::vector<double> &nodes, std::vector<double> &weights)
        {
            const auto &g = gauss_rule();
            std::vector<double> cuts{a};
            // a and b share a sign because 0 is always a breakpoint
            const double sa = a * scale, sb = b * scale;
            const double qa = 0.5 * pi * sa * sa, qb = 0.5 * pi * sb * sb;
            const int n_phase = std::max(1, static_cast<int>(std::ceil(std::abs(qb - qa) / phase_step)));
            const double sign = (a + b) >= 0.0 ? 1.0 : -1.0;
            for (int i = 1; i < n_phase; ++i)
            {
                const double q = qa + (qb - qa) * i / n_phase;
                cuts.push_back(sign * std::sqrt(2.0 * q / pi) / scale);
            }
            cuts.push_back(b);

            for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            {
                const double c0 = cuts[k], c1 = cuts[k + 1];
                const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(c1 - c0) * scale / max_width_nu)));
                for (int s = 0; s < sub; ++s)
                {
                    const double p0 = c0 + (c1 - c0) * s / sub;
                    const double p1 = c0 + (c1 - c0) * (s + 1) / sub;
                    const double half = 0.5 * (p1 - p0), mid = 0.5 * (p1 + p0);
                    for (int i = 0; i < kGaussPoints; ++i)
                    {
                        nodes.push_back(mid + half * g.x[i]);
                        weights.push_back(half * g.w[i]);
                    }
                }
            }
        }

        std::complex<double> aperture_integral(const ScreenFrame &fr, double k, double scale,
                                               const AxisPlan &px, const AxisPlan &py,
                                               double phase_step, double max_width_nu)
        {
            std::complex<double> total{0.0, 0.0};
            for (std::size_t i = 0; i + 1 < px.breaks.size(); ++i)
            {
                const double xa = px.breaks[i], xb = px.breaks[i + 1];
                const double xm = 0.5 * (xa + xb);
                const bool x_in_screen = xm > fr.x_lo && xm < fr.x_hi;

                std::vector<double> xn, xw;
                axis_nodes(xa, xb, scale, phase_step, max_width_nu, xn, xw);
                std::vector<double> xtaper(xn.size());
                for (std::size_t a = 0; a < xn.size(); ++a)
                    xtaper[a] = xw[a] * smooth_window(xn[a], px.taper_start, px.taper_end);

                for (std::size_t j = 0; j + 1 < py.breaks.size(); ++j)
                {
                    const double ya = py.breaks[j], yb = py.breaks[j + 1];
                    const double ym = 0.5 * (ya + yb);
                    if (x_in_screen && ym > fr.y_lo && ym < fr.y_hi)
                        continue; // obstructed cell

                    std::vector<double> yn, yw;
                    axis_nodes(ya, yb, scale, phase_step, max_width_nu, yn, yw);
                    for (std::size_t b = 0; b < yn.size(); ++b)
                    {
                        const double wy = yw[b] * smooth_window(yn[b], py.taper_start, py.taper_end);
                        if (wy == 0.0)
                            continue;
                        const double y2 = yn[b] * yn[b];
                        std::complex<double> row{0.0, 0.0};
                        for (std::size_t a = 0; a < xn.size(); ++a)
                        {
                            if (xtaper[a] == 0.0)
                                continue;
                            const double phase = k * excess_path(fr.r0, fr.s0, xn[a] * xn[a] + y2);
                            row += xtaper[a] * std::complex<double>(std::cos(phase), std::sin(phase));
                        }
                        total += wy * row;
                    }
                }
            }
            return total;
        }
    }

    DiffractionField fresnel_kirchhoff_field(const LinkGeometry &link, const ScreenGeometry &screen,
                                             const QuadratureSettings &quad)
    {
        if (!(quad.rel_tol > 0.0) || !(quad.fresnel_zones > 0.0) || quad.max_refinements < 1)
            throw ConfigError("quadrature needs rel_tol > 0, fresnel_zones > 0, max_refinements >= 1",
                              "E_QUADRATURE");
        const ScreenFrame fr = screen_frame(link, screen);
        const double lambda = link.wavelength_m;
        const double k = link.wavenumber();
        // nu = scale * t is the Fresnel-Kirchhoff diffraction parameter
        const double scale = std::sqrt(2.0 * (fr.r0 + fr.s0) / (lambda * fr.r0 * fr.s0));
        const double zone_nu = std::sqrt(2.0 * quad.fresnel_zones);

        const AxisPlan px = plan_axis(fr.x_lo, fr.x_hi, scale, zone_nu);
        const AxisPlan py = plan_axis(fr.y_lo, fr.y_hi, scale, zone_nu);

        // U / U0 = -i (r0 + s0) / (lambda r0 s0) * integral of exp(ik(r + s - r0 - s0))
        const std::complex<double> prefactor{0.0, -(fr.r0 + fr.s0) / (lambda * fr.r0 * fr.s0)};

        double phase_step = 2.0 * pi;
        double max_width_nu = 1.0;
        std::complex<double> prev = prefactor * aperture_integral(fr, k, scale, px, py, phase_step, max_width_nu);
        double change = 0.0;
        for (int level = 1; level <= quad.max_refinements; ++level)
        {
            phase_step *= 0.5;
            max_width_nu *= 0.5;
            const std::complex<double> cur =
                prefactor * aperture_integral(fr, k, scale, px, py, phase_step, max_width_nu);
            change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-3);
            prev = cur;
            if (change <= quad.rel_tol)
            {
                DiffractionField out;
                out.u0 = std::polar(link.e0_field / (fr.r0 + fr.s0), k * (fr.r0 + fr.s0));
                out.u = cur * out.u0;
                out.refinements = level;
                out.rel_change = change;
                return out;
            }
        }
        throw ConvergenceError("Fresnel-Kirchhoff quadrature did not converge", std::abs(prev), change);
    }

    TranslatedGeometry equivalent_translation(const Vec3 &tx_pos, double aod_deg, double zod_deg,
                                              double path_length_m, const ScreenGeometry &target_screen,
                                              double wavelength_m)
    {
        TranslatedGeometry g;
        g.link.l1_pos_m = tx_pos;
        g.link.l2_pos_m = tx_pos + unit_vector(aod_deg, zod_deg) * path_length_m;
        g.link.wavelength_m = wavelength_m;
        g.screen = target_screen;
        return g;
    }

    AntennaConfig steer(AntennaConfig antenna, double az_deg, double zen_deg)
    {
        antenna.boresight_az_deg = az_deg;
        antenna.boresight_zen_deg = zen_deg;
        return antenna;
    }
}
