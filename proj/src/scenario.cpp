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

#include "isac/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include <json.hpp>

#include "isac/analysis.hpp"
#include "isac/io.hpp"
#include "isac/rng.hpp"

namespace isac
{
    namespace fs = std::filesystem;
    using json = nlohmann::json;

    std::string_view to_string(CouplingMode mode)
    {
        switch (mode)
        {
        case CouplingMode::Los4kedg:
            return "los_4kedg";
        case CouplingMode::NlosNormal:
            return "nlos_normal";
        case CouplingMode::Explicit:
            return "explicit";
        }
        return "los_4kedg";
    }

    namespace
    {
        std::string child_ptr(const std::string &ptr, std::string_view key)
        {
            return ptr + "/" + std::string(key);
        }

        std::string index_ptr(const std::string &ptr, std::size_t i)
        {
            return ptr + "/" + std::to_string(i);
        }

        // Schema walker that records problems instead of throwing.
        class Parser
        {
        public:
            Parser(std::vector<Diagnostic> &diags, fs::path base) : diags_(diags), base_(std::move(base)) {}

            void error(std::string code, std::string ptr, std::string message)
            {
                diags_.push_back({std::move(code), ptr.empty() ? "/" : std::move(ptr), std::move(message)});
            }

            bool is_object(const json &j, const std::string &ptr)
            {
                if (j.is_object())
                    return true;
                error("E_SCHEMA_TYPE", ptr, "expected an object");
                return false;
            }

            void allow_keys(const json &obj, const std::string &ptr, std::initializer_list<std::string_view> keys)
            {
                for (const auto &[k, v] : obj.items())
                    if (std::find(keys.begin(), keys.end(), k) == keys.end())
                        error("E_SCHEMA_UNKNOWN", child_ptr(ptr, k), "unknown key '" + k + "'");
            }

            const json *find(const json &obj, std::string_view key)
            {
                const auto it = obj.find(std::string(key));
                return it == obj.end() ? nullptr : &*it;
            }

            void number(const json &obj, const std::string &ptr, std::string_view key, double &out)
            {
                const json *v = find(obj, key);
                if (!v)
                    return;
                if (!v->is_number())
                    error("E_SCHEMA_TYPE", child_ptr(ptr, key), "expected a number");
                else
                    out = v->get<double>();
            }

            void integer(const json &obj, const std::string &ptr, std::string_view key, int &out)
            {
                const json *v = find(obj, key);
                if (!v)
                    return;
                if (!v->is_number_integer())
                    error("E_SCHEMA_TYPE", child_ptr(ptr, key), "expected an integer");
                else
                    out = v->get<int>();
            }

            void boolean(const json &obj, const std::string &ptr, std::string_view key, bool &out)
            {
                const json *v = find(obj, key);
                if (!v)
                    return;
                if (!v->is_boolean())
                    error("E_SCHEMA_TYPE", child_ptr(ptr, key), "expected true or false");
                else
                    out = v->get<bool>();
            }

            void string(const json &obj, const std::string &ptr, std::string_view key, std::string &out)
            {
                const json *v = find(obj, key);
                if (!v)
                    return;
                if (!v->is_string())
                    error("E_SCHEMA_TYPE", child_ptr(ptr, key), "expected a string");
                else
                    out = v->get<std::string>();
            }

            void vec3(const json &obj, const std::string &ptr, std::string_view key, Vec3 &out)
            {
                const json *v = find(obj, key);
                if (!v)
                    return;
                if (!v->is_array() || v->size() != 3 || !(*v)[0].is_number() || !(*v)[1].is_number() ||
                    !(*v)[2].is_number())
                {
                    error("E_SCHEMA_TYPE", child_ptr(ptr, key), "expected [x, y, z]");
                    return;
                }
                out = {(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
            }

            fs::path resolve(const std::string &file) const
            {
                const fs::path p(file);
                return p.is_absolute() ? p : base_ / p;
            }

            AntennaConfig antenna(const json &obj, const std::string &ptr, AntennaConfig a, int &id)
            {
                if (!is_object(obj, ptr))
                    return a;
                allow_keys(obj, ptr,
                           {"id", "pattern", "location_m", "velocity_mps", "boresight_az_deg", "boresight_zen_deg",
                            "az_hpbw_deg", "el_hpbw_deg", "gain_dbi", "side_lobe_floor_db"});
                std::string pattern;
                string(obj, ptr, "pattern", pattern);
                if (pattern == "horn")
                {
                    const auto keep = a.location_m;
                    a = AntennaConfig::horn_105ghz(keep);
                }
                else if (pattern == "omni")
                {
                    const auto keep = a.location_m;
                    a = AntennaConfig::omni_105ghz(keep);
                }
                else if (!pattern.empty())
                {
                    error("E_ANTENNA_PATTERN", child_ptr(ptr, "pattern"), "pattern must be 'horn' or 'omni'");
                }
                integer(obj, ptr, "id", id);
                vec3(obj, ptr, "location_m", a.location_m);
                vec3(obj, ptr, "velocity_mps", a.velocity_mps);
                number(obj, ptr, "boresight_az_deg", a.boresight_az_deg);
                number(obj, ptr, "boresight_zen_deg", a.boresight_zen_deg);
                number(obj, ptr, "az_hpbw_deg", a.az_hpbw_deg);
                number(obj, ptr, "el_hpbw_deg", a.el_hpbw_deg);
                number(obj, ptr, "gain_dbi", a.gain_dbi);
                number(obj, ptr, "side_lobe_floor_db", a.side_lobe_floor_db);
                try
                {
                    a.validate();
                }
                catch (const Error &e)
                {
                    error(e.code(), ptr, e.what());
                }
                return a;
            }

            std::optional<PathComponent> path(const json &obj, const std::string &ptr, Origin origin)
            {
                if (!is_object(obj, ptr))
                    return std::nullopt;
                allow_keys(obj, ptr,
                           {"cluster", "path", "amp_re", "amp_im", "power_lin", "delay_s", "aod_deg", "zod_deg",
                            "aoa_deg", "zoa_deg", "doppler_hz", "phase_rad"});
                PathComponent p;
                p.origin = origin;
                integer(obj, ptr, "cluster", p.cluster_index);
                integer(obj, ptr, "path", p.path_index);
                number(obj, ptr, "delay_s", p.delay_s);
                number(obj, ptr, "aod_deg", p.aod_deg);
                number(obj, ptr, "zod_deg", p.zod_deg);
                number(obj, ptr, "aoa_deg", p.aoa_deg);
                number(obj, ptr, "zoa_deg", p.zoa_deg);
                number(obj, ptr, "doppler_hz", p.doppler_hz);
                number(obj, ptr, "phase_rad", p.initial_phase_rad);
                const bool has_power = find(obj, "power_lin") != nullptr;
                if (has_power && (find(obj, "amp_re") || find(obj, "amp_im")))
                    error("E_PATH_AMPLITUDE", ptr, "give either power_lin or amp_re/amp_im, not both");
                if (has_power)
                {
                    double power = 0.0;
                    number(obj, ptr, "power_lin", power);
                    if (!(power >= 0.0))
                        error("E_PATH_AMPLITUDE", child_ptr(ptr, "power_lin"), "power_lin must be >= 0");
                    else
                        p.amplitude = std::polar(std::sqrt(power), p.initial_phase_rad);
                }
                else
                {
                    double re = 0.0, im = 0.0;
                    number(obj, ptr, "amp_re", re);
                    number(obj, ptr, "amp_im", im);
                    p.amplitude = {re, im};
                }
                try
                {
                    validate_path(p);
                }
                catch (const Error &e)
                {
                    error(e.code(), ptr, e.what());
                    return std::nullopt;
                }
                return p;
            }

            std::vector<PathComponent> path_list(const json &arr, const std::string &ptr, Origin origin)
            {
                std::vector<PathComponent> out;
                if (!arr.is_array())
                {
                    error("E_SCHEMA_TYPE", ptr, "expected an array of paths");
                    return out;
                }
                for (std::size_t i = 0; i < arr.size(); ++i)
                    if (auto p = path(arr[i], index_ptr(ptr, i), origin))
                        out.push_back(*p);
                return out;
            }

            std::vector<double> axis(const json &obj, const std::string &ptr, std::string_view key,
                                     std::vector<double> fallback)
            {
                const json *v = find(obj, key);
                if (!v)
                    return fallback;
                const auto p = child_ptr(ptr, key);
                std::vector<double> out;
                if (v->is_array())
                {
                    for (std::size_t i = 0; i < v->size(); ++i)
                    {
                        if (!(*v)[i].is_number())
                        {
                            error("E_SCHEMA_TYPE", index_ptr(p, i), "expected a number");
                            return fallback;
                        }
                        out.push_back((*v)[i].get<double>());
                    }
                }
                else if (v->is_object())
                {
                    allow_keys(*v, p, {"start", "stop", "step"});
                    double start = 0.0, stop = 0.0, step = 0.0;
                    for (const char *k : {"start", "stop", "step"})
                        if (!find(*v, k))
                            error("E_SCHEMA_MISSING", child_ptr(p, k), std::string("missing '") + k + "'");
                    number(*v, p, "start", start);
                    number(*v, p, "stop", stop);
                    number(*v, p, "step", step);
                    if (!(step > 0.0) || !(stop >= start))
                    {
                        error("E_AXIS_MONOTONE", p, "axis needs step > 0 and stop >= start");
                        return fallback;
                    }
                    out = uniform_axis(start, stop, step);
                }
                else
                {
                    error("E_SCHEMA_TYPE", p, "expected an array or {start, stop, step}");
                    return fallback;
                }
                if (out.empty())
                    error("E_AXIS_MONOTONE", p, "axis is empty");
                for (std::size_t i = 1; i < out.size(); ++i)
                    if (!(out[i] > out[i - 1]))
                    {
                        error("E_AXIS_MONOTONE", p, "axis values must be strictly increasing");
                        break;
                    }
                return out;
            }

        private:
            std::vector<Diagnostic> &diags_;
            fs::path base_;
        };

        void parse_axes(Parser &ps, const json *node, AxesConfig &axes)
        {
            const std::string ptr = "/axes";
            json empty = json::object();
            const json &obj = node ? *node : empty;
            if (!ps.is_object(obj, ptr))
                return;
            ps.allow_keys(obj, ptr, {"angle_deg", "delay_s", "truncate_range_m", "out_of_range"});

            if (const json *t = ps.find(obj, "truncate_range_m"))
            {
                if (t->is_null())
                    axes.truncate_range_m.reset();
                else if (!t->is_number() || !(t->get<double>() > 0.0))
                    ps.error("E_AXIS_RANGE", "/axes/truncate_range_m", "truncate_range_m must be > 0 or null");
                else
                    axes.truncate_range_m = t->get<double>();
            }
            const double delay_span = axes.truncate_range_m.value_or(75.0) / speed_of_light;
            axes.angle_deg = ps.axis(obj, ptr, "angle_deg", uniform_axis(0.0, 180.0, 5.0));
            axes.delay_s = ps.axis(obj, ptr, "delay_s", uniform_axis(0.0, delay_span, 1e-9));

            std::string policy = "drop";
            ps.string(obj, ptr, "out_of_range", policy);
            if (policy == "drop")
                axes.out_of_range = OutOfRange::Drop;
            else if (policy == "clamp")
                axes.out_of_range = OutOfRange::Clamp;
            else if (policy == "strict")
                axes.out_of_range = OutOfRange::Strict;
            else
                ps.error("E_SCHEMA_ENUM", "/axes/out_of_range", "out_of_range must be strict, drop or clamp");
        }

        void parse_environment(Parser &ps, const json *node, EnvironmentSpec &env)
        {
            const std::string ptr = "/environment";
            if (!node)
            {
                ps.error("E_NO_ENVIRONMENT", ptr, "no environment: give paths, paths_csv or clusters");
                return;
            }
            if (!ps.is_object(*node, ptr))
                return;
            ps.allow_keys(*node, ptr, {"paths", "paths_csv", "clusters", "common_cluster_delay"});
            ps.boolean(*node, ptr, "common_cluster_delay", env.common_cluster_delay);

            if (const json *paths = ps.find(*node, "paths"))
                env.explicit_paths = ps.path_list(*paths, child_ptr(ptr, "paths"), Origin::Environment);
            std::string csv;
            ps.string(*node, ptr, "paths_csv", csv);
            if (!csv.empty())
            {
                try
                {
                    auto more = load_paths_csv(ps.resolve(csv));
                    for (std::size_t i = 0; i < more.size(); ++i)
                    {
                        more[i].origin = Origin::Environment;
                        try
                        {
                            validate_path(more[i]);
                        }
                        catch (const Error &e)
                        {
                            ps.error(e.code(), child_ptr(ptr, "paths_csv"), csv + " row " + std::to_string(i + 1) + ": " + e.what());
                        }
                    }
                    env.explicit_paths.insert(env.explicit_paths.end(), more.begin(), more.end());
                }
                catch (const Error &e)
                {
                    ps.error(e.code(), child_ptr(ptr, "paths_csv"), e.what());
                }
            }

            if (const json *clusters = ps.find(*node, "clusters"))
            {
                const auto cptr = child_ptr(ptr, "clusters");
                if (!clusters->is_array())
                    ps.error("E_SCHEMA_TYPE", cptr, "expected an array");
                else
                    for (std::size_t i = 0; i < clusters->size(); ++i)
                    {
                        const auto &c = (*clusters)[i];
                        const auto p = index_ptr(cptr, i);
                        if (!ps.is_object(c, p))
                            continue;
                        ps.allow_keys(c, p,
                                      {"cluster", "num_paths", "mean_delay_s", "delay_spread_s", "mean_aod_deg",
                                       "aod_spread_deg", "mean_zod_deg", "zod_spread_deg", "mean_aoa_deg",
                                       "aoa_spread_deg", "mean_zoa_deg", "zoa_spread_deg", "cluster_power_lin"});
                        ClusterSpec s;
                        s.cluster_index = static_cast<int>(i + 1);
                        ps.integer(c, p, "cluster", s.cluster_index);
                        ps.integer(c, p, "num_paths", s.num_paths);
                        ps.number(c, p, "mean_delay_s", s.mean_delay_s);
                        ps.number(c, p, "delay_spread_s", s.delay_spread_s);
                        ps.number(c, p, "mean_aod_deg", s.mean_aod_deg);
                        ps.number(c, p, "aod_spread_deg", s.aod_spread_deg);
                        ps.number(c, p, "mean_zod_deg", s.mean_zod_deg);
                        ps.number(c, p, "zod_spread_deg", s.zod_spread_deg);
                        ps.number(c, p, "mean_aoa_deg", s.mean_aoa_deg);
                        ps.number(c, p, "aoa_spread_deg", s.aoa_spread_deg);
                        ps.number(c, p, "mean_zoa_deg", s.mean_zoa_deg);
                        ps.number(c, p, "zoa_spread_deg", s.zoa_spread_deg);
                        ps.number(c, p, "cluster_power_lin", s.cluster_power_lin);
                        try
                        {
                            s.validate();
                            env.clusters.push_back(s);
                        }
                        catch (const Error &e)
                        {
                            ps.error(e.code(), p, e.what());
                        }
                    }
            }

            if (env.clusters.empty() && env.explicit_paths.empty() && !ps.find(*node, "paths_csv") &&
                !ps.find(*node, "paths") && !ps.find(*node, "clusters"))
                ps.error("E_NO_ENVIRONMENT", ptr, "no environment: give paths, paths_csv or clusters");
            else if (env.clusters.empty() && env.explicit_paths.empty())
                ps.error("E_NO_ENVIRONMENT", ptr, "environment has no clusters and no paths");

            std::set<std::pair<int, int>> seen;
            for (const auto &p : env.explicit_paths)
                if (!seen.insert({p.cluster_index, p.path_index}).second)
                    ps.error("E_PATH_DUPLICATE", ptr,
                             "duplicate path (" + std::to_string(p.cluster_index) + ", " + std::to_string(p.path_index) + ")");
            for (const auto &c : env.clusters)
                for (int m = 1; m <= c.num_paths; ++m)
                    if (!seen.insert({c.cluster_index, m}).second)
                    {
                        ps.error("E_PATH_DUPLICATE", ptr,
                                 "cluster " + std::to_string(c.cluster_index) + " collides with explicit paths");
                        break;
                    }
        }

        void parse_targets(Parser &ps, const json *node, std::vector<TargetConfig> &targets)
        {
            if (!node)
                return;
            const std::string ptr = "/targets";
            if (!node->is_array())
            {
                ps.error("E_SCHEMA_TYPE", ptr, "expected an array");
                return;
            }
            std::set<int> ids;
            for (std::size_t i = 0; i < node->size(); ++i)
            {
                const auto &t = (*node)[i];
                const auto p = index_ptr(ptr, i);
                if (!ps.is_object(t, p))
                    continue;
                ps.allow_keys(t, p,
                              {"id", "position_m", "w1_m", "w2_m", "h1_m", "h2_m", "velocity_mps", "rcs", "tx_link",
                               "rx_link", "top_k"});
                TargetConfig tc;
                auto &st = tc.st;
                st.id = static_cast<int>(i + 1);
                ps.integer(t, p, "id", st.id);
                if (!ps.find(t, "position_m"))
                    ps.error("E_SCHEMA_MISSING", child_ptr(p, "position_m"), "missing target position");
                ps.vec3(t, p, "position_m", st.position_m);
                ps.number(t, p, "w1_m", st.w1_m);
                ps.number(t, p, "w2_m", st.w2_m);
                ps.number(t, p, "h1_m", st.h1_m);
                ps.number(t, p, "h2_m", st.h2_m);
                ps.vec3(t, p, "velocity_mps", st.velocity_mps);
                try
                {
                    st.validate();
                }
                catch (const Error &e)
                {
                    ps.error(e.code(), p, e.what());
                }
                if (!ids.insert(st.id).second)
                    ps.error("E_ST_ID", child_ptr(p, "id"), "duplicate target id " + std::to_string(st.id));

                if (const json *rcs = ps.find(t, "rcs"))
                {
                    const auto rp = child_ptr(p, "rcs");
                    try
                    {
                        if (rcs->is_number())
                        {
                            st.rcs = RcsTable::isotropic(rcs->get<double>());
                        }
                        else if (ps.is_object(*rcs, rp))
                        {
                            ps.allow_keys(*rcs, rp, {"sigma_m2", "table_csv", "interpolation", "fallback_sigma_m2"});
                            double sigma = 1.0;
                            ps.number(*rcs, rp, "sigma_m2", sigma);
                            ps.number(*rcs, rp, "fallback_sigma_m2", sigma);
                            std::string table, interp = "bilinear";
                            ps.string(*rcs, rp, "table_csv", table);
                            ps.string(*rcs, rp, "interpolation", interp);
                            if (interp != "bilinear" && interp != "nearest")
                                ps.error("E_SCHEMA_ENUM", child_ptr(rp, "interpolation"), "interpolation must be nearest or bilinear");
                            if (table.empty())
                            {
                                st.rcs = RcsTable::isotropic(sigma);
                            }
                            else
                            {
                                std::istringstream in(read_text_file(ps.resolve(table)));
                                st.rcs = RcsTable::from_samples(read_rcs_csv(in, table),
                                                                interp == "nearest" ? RcsInterpolation::Nearest
                                                                                    : RcsInterpolation::Bilinear,
                                                                sigma);
                            }
                        }
                    }
                    catch (const Error &e)
                    {
                        ps.error(e.code(), rp, e.what());
                    }
                }
                if (const json *leg = ps.find(t, "tx_link"))
                    tc.tx_link = ps.path_list(*leg, child_ptr(p, "tx_link"), Origin::TargetNonCoupled);
                if (const json *leg = ps.find(t, "rx_link"))
                    tc.rx_link = ps.path_list(*leg, child_ptr(p, "rx_link"), Origin::TargetNonCoupled);
                int top_k = 0;
                ps.integer(t, p, "top_k", top_k);
                if (top_k < 0)
                    ps.error("E_TOP_K", child_ptr(p, "top_k"), "top_k must be >= 0");
                tc.top_k = static_cast<std::size_t>(std::max(top_k, 0));
                targets.push_back(std::move(tc));
            }
        }

        void parse_coupling(Parser &ps, const json *node, CouplingConfig &c)
        {
            if (!node)
                return;
            const std::string ptr = "/coupling";
            if (!ps.is_object(*node, ptr))
                return;
            ps.allow_keys(*node, ptr,
                          {"mode", "level", "majority", "br_margin_kappa", "nlos", "explicit", "default_fs_cf_lin"});
            std::string mode = "los_4kedg";
            ps.string(*node, ptr, "mode", mode);
            if (mode == "los_4kedg")
                c.mode = CouplingMode::Los4kedg;
            else if (mode == "nlos_normal")
                c.mode = CouplingMode::NlosNormal;
            else if (mode == "explicit")
                c.mode = CouplingMode::Explicit;
            else
                ps.error("E_COUPLING_MODE", child_ptr(ptr, "mode"),
                         "mode must be los_4kedg, nlos_normal or explicit, not '" + mode + "'");

            std::string level = "per_path";
            ps.string(*node, ptr, "level", level);
            if (level == "per_path")
                c.level = CouplingLevel::PerPath;
            else if (level == "per_cluster")
                c.level = CouplingLevel::PerCluster;
            else
                ps.error("E_SCHEMA_ENUM", child_ptr(ptr, "level"), "level must be per_path or per_cluster");
            ps.boolean(*node, ptr, "majority", c.majority);

            ps.number(*node, ptr, "br_margin_kappa", c.br_margin_kappa);
            if (!(c.br_margin_kappa >= 0.0))
                ps.error("E_BR_KAPPA", child_ptr(ptr, "br_margin_kappa"), "br_margin_kappa must be >= 0");

            if (const json *n = ps.find(*node, "nlos"))
            {
                const auto np = child_ptr(ptr, "nlos");
                if (ps.is_object(*n, np))
                {
                    ps.allow_keys(*n, np, {"mean_db", "var_db2"});
                    ps.number(*n, np, "mean_db", c.nlos.mean_db);
                    ps.number(*n, np, "var_db2", c.nlos.var_db2);
                    if (!(c.nlos.var_db2 >= 0.0))
                        ps.error("E_NLOS_VARIANCE", child_ptr(np, "var_db2"), "var_db2 must be >= 0");
                }
            }

            ps.number(*node, ptr, "default_fs_cf_lin", c.default_fs_cf_lin);
            if (!(c.default_fs_cf_lin >= 0.0))
                ps.error("E_FS_CF", child_ptr(ptr, "default_fs_cf_lin"), "default_fs_cf_lin must be >= 0");

            if (const json *list = ps.find(*node, "explicit"))
            {
                const auto lp = child_ptr(ptr, "explicit");
                if (!list->is_array())
                {
                    ps.error("E_SCHEMA_TYPE", lp, "expected an array");
                    return;
                }
                for (std::size_t i = 0; i < list->size(); ++i)
                {
                    const auto &e = (*list)[i];
                    const auto ep = index_ptr(lp, i);
                    if (!ps.is_object(e, ep))
                        continue;
                    ps.allow_keys(e, ep, {"target", "cluster", "path", "fs_cf_lin", "fs_cf_db"});
                    ExplicitFsCf v;
                    if (ps.find(e, "target"))
                    {
                        int id = 0;
                        ps.integer(e, ep, "target", id);
                        v.target = id;
                    }
                    ps.integer(e, ep, "cluster", v.cluster);
                    ps.integer(e, ep, "path", v.path);
                    const bool lin = ps.find(e, "fs_cf_lin") != nullptr, db = ps.find(e, "fs_cf_db") != nullptr;
                    if (lin == db)
                        ps.error("E_FS_CF", ep, "give exactly one of fs_cf_lin and fs_cf_db");
                    if (lin)
                        ps.number(e, ep, "fs_cf_lin", v.fs_cf_lin);
                    if (db)
                    {
                        double d = 0.0;
                        ps.number(e, ep, "fs_cf_db", d);
                        v.fs_cf_lin = std::pow(10.0, d / 10.0);
                    }
                    if (!(v.fs_cf_lin >= 0.0) || !std::isfinite(v.fs_cf_lin))
                        ps.error("E_FS_CF", ep, "fs_cf must be finite and >= 0");
                    c.explicit_values.push_back(v);
                }
            }
        }
    }

    ValidationResult validate_config_text(std::string_view json_text, const fs::path &base_dir)
    {
        ValidationResult res;
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            res.diagnostics.push_back({"E_JSON_PARSE", "/", e.what()});
            return res;
        }

        Parser ps(res.diagnostics, base_dir);
        if (!ps.is_object(doc, ""))
            return res;
        ps.allow_keys(doc, "",
                      {"name", "description", "carrier_hz", "rng_seed", "timestamp_s", "tx", "rx", "axes",
                       "environment", "targets", "coupling", "reference_padp_csv"});

        ScenarioConfig cfg;
        ps.string(doc, "", "name", cfg.name);
        ps.number(doc, "", "carrier_hz", cfg.env.carrier_hz);
        if (!(cfg.env.carrier_hz > 0.0) || !std::isfinite(cfg.env.carrier_hz))
            ps.error("E_CARRIER_RANGE", "/carrier_hz", "carrier_hz must be > 0");
        if (const json *seed = ps.find(doc, "rng_seed"))
        {
            if (seed->is_number_unsigned())
                cfg.env.rng_seed = seed->get<std::uint64_t>();
            else if (seed->is_number_integer() && seed->get<std::int64_t>() >= 0)
                cfg.env.rng_seed = static_cast<std::uint64_t>(seed->get<std::int64_t>());
            else
                ps.error("E_SCHEMA_TYPE", "/rng_seed", "rng_seed must be a non-negative integer");
        }
        ps.number(doc, "", "timestamp_s", cfg.timestamp_s);
        if (!std::isfinite(cfg.timestamp_s))
            ps.error("E_SCHEMA_TYPE", "/timestamp_s", "timestamp_s must be finite");

        cfg.env.tx = AntennaConfig::horn_105ghz({0.0, 0.0, 1.4});
        cfg.env.rx = AntennaConfig::omni_105ghz({0.0, 24.0, 1.4});
        if (const json *tx = ps.find(doc, "tx"))
            cfg.env.tx = ps.antenna(*tx, "/tx", cfg.env.tx, cfg.env.tx_antenna_id);
        if (const json *rx = ps.find(doc, "rx"))
            cfg.env.rx = ps.antenna(*rx, "/rx", cfg.env.rx, cfg.env.rx_antenna_id);

        parse_axes(ps, ps.find(doc, "axes"), cfg.axes);
        parse_environment(ps, ps.find(doc, "environment"), cfg.env);
        parse_targets(ps, ps.find(doc, "targets"), cfg.targets);
        parse_coupling(ps, ps.find(doc, "coupling"), cfg.coupling);

        for (std::size_t i = 0; i < cfg.targets.size(); ++i)
        {
            const auto &pos = cfg.targets[i].st.position_m;
            if (pos == cfg.env.tx.location_m || pos == cfg.env.rx.location_m)
                ps.error("E_GEOMETRY", index_ptr("/targets", i) + "/position_m", "target coincides with an antenna");
        }
        if (cfg.coupling.mode == CouplingMode::Explicit)
        {
            std::set<int> ids;
            for (const auto &t : cfg.targets)
                ids.insert(t.st.id);
            for (std::size_t i = 0; i < cfg.coupling.explicit_values.size(); ++i)
            {
                const auto &v = cfg.coupling.explicit_values[i];
                if (v.target && !ids.count(*v.target))
                    ps.error("E_ST_ID", "/coupling/explicit/" + std::to_string(i) + "/target",
                             "unknown target " + std::to_string(*v.target));
            }
        }

        std::string reference;
        ps.string(doc, "", "reference_padp_csv", reference);
        if (!reference.empty())
            cfg.reference_padp_csv = ps.resolve(reference);

        if (res.diagnostics.empty())
            res.config = std::move(cfg);
        return res;
    }

    ValidationResult validate_config(const fs::path &config_path)
    {
        std::string text;
        try
        {
            text = read_text_file(config_path);
        }
        catch (const IoError &e)
        {
            ValidationResult res;
            res.diagnostics.push_back({"E_IO", "/", e.what()});
            return res;
        }
        return validate_config_text(text, config_path.parent_path());
    }

    ScenarioConfig load_config(const fs::path &config_path)
    {
        auto res = validate_config(config_path);
        if (!res.ok())
        {
            const auto &d = res.diagnostics.front();
            const std::string msg = config_path.string() + ": " + d.pointer + ": " + d.message;
            if (d.code == "E_IO")
                throw IoError(msg);
            throw ConfigError(msg, d.code);
        }
        return std::move(*res.config);
    }

    int exit_code_for(const std::exception &e)
    {
        if (const auto *s = dynamic_cast<const StepError *>(&e))
            return s->exit_code();
        if (dynamic_cast<const ConfigError *>(&e))
            return 2;
        if (dynamic_cast<const IoError *>(&e))
            return 4;
        return 3;
    }

    ChannelRealization step_environment(const ScenarioConfig &cfg)
    {
        return generate_environment(cfg.env, cfg.timestamp_s);
    }

    BlockageResult step_br_cf(const ScenarioConfig &cfg, const ChannelRealization &env)
    {
        BlockageResult out;
        for (const auto &t : cfg.targets)
        {
            const auto br = blockage_region(t.st, cfg.env.tx, cfg.env.rx, cfg.coupling.br_margin_kappa);
            out.regions.push_back(br);
            out.factors.push_back(compute_br_cf(env, br, cfg.coupling.level, cfg.coupling.majority));
        }
        return out;
    }

    namespace
    {
        ChannelRealization empty_like(const ScenarioConfig &cfg, ChannelKind kind)
        {
            ChannelRealization r;
            r.state = ChannelState::WithTarget;
            r.kind = kind;
            r.tx_antenna_id = cfg.env.tx_antenna_id;
            r.rx_antenna_id = cfg.env.rx_antenna_id;
            r.timestamp_s = cfg.timestamp_s;
            return r;
        }
    }

    ChannelRealization step_target(const ScenarioConfig &cfg)
    {
        ChannelRealization out = empty_like(cfg, ChannelKind::TargetNonCoupled);
        const double lambda = cfg.env.wavelength_m();
        for (const auto &t : cfg.targets)
        {
            HalfLink tx_leg, rx_leg;
            if (t.tx_link)
                tx_leg.paths = *t.tx_link;
            else
                tx_leg = direct_tx_leg(cfg.env.tx, t.st.id, t.st.position_m, t.st.velocity_mps, lambda, cfg.timestamp_s);
            if (t.rx_link)
                rx_leg.paths = *t.rx_link;
            else
                rx_leg = direct_rx_leg(cfg.env.rx, t.st.id, t.st.position_m, t.st.velocity_mps, lambda, cfg.timestamp_s);
            tx_leg.st_id = rx_leg.st_id = t.st.id;
            tx_leg.antenna_id = cfg.env.tx_antenna_id;
            rx_leg.antenna_id = cfg.env.rx_antenna_id;
            tx_leg.timestamp_s = rx_leg.timestamp_s = cfg.timestamp_s;

            const auto part = concatenate_links(tx_leg, rx_leg, t.st.rcs, cfg.env.rng_seed, t.top_k);
            out.paths.insert(out.paths.end(), part.paths.begin(), part.paths.end());
        }
        return out;
    }

    CouplingFactors step_fs_cf(const ScenarioConfig &cfg, const ChannelRealization &env, const BlockageResult &br)
    {
        if (cfg.targets.empty())
        {
            // no target: every entry unaffected
            BlockageRegion none;
            none.az_lo_deg = none.az_hi_deg = 0.0;
            none.delay_min_s = std::numeric_limits<double>::infinity();
            return compute_br_cf(env, none, cfg.coupling.level, cfg.coupling.majority);
        }

        std::vector<CouplingFactors> per_target;
        for (std::size_t k = 0; k < cfg.targets.size(); ++k)
        {
            const auto &st = cfg.targets[k].st;
            CouplingFactors f = br.factors.at(k);
            switch (cfg.coupling.mode)
            {
            case CouplingMode::Los4kedg:
                f = compute_fs_cf_los(env, std::move(f), st, cfg.env.tx, cfg.env.rx, cfg.env.wavelength_m());
                break;
            case CouplingMode::NlosNormal:
                f = sample_fs_cf_nlos(std::move(f), cfg.coupling.nlos,
                                      derive_seed(cfg.env.rng_seed, "coupling.target", static_cast<std::uint64_t>(st.id)));
                break;
            case CouplingMode::Explicit:
            {
                std::map<PathKey, std::size_t> index;
                for (std::size_t i = 0; i < f.size(); ++i)
                {
                    index.emplace(f.keys()[i], i);
                    if (f.br_cf()[i] == 0)
                        f.set_fs_cf(i, cfg.coupling.default_fs_cf_lin);
                }
                for (const auto &v : cfg.coupling.explicit_values)
                {
                    if (v.target && *v.target != st.id)
                        continue;
                    const PathKey key{v.cluster, cfg.coupling.level == CouplingLevel::PerCluster ? 0 : v.path};
                    const auto it = index.find(key);
                    if (it == index.end())
                        throw ConfigError("explicit fs_cf for unknown entry (cluster " + std::to_string(v.cluster) +
                                              ", path " + std::to_string(v.path) + ")",
                                          "E_COUPLING_KEY");
                    if (f.br_cf()[it->second] == 1)
                    {
                        if (v.target)
                            f.set_fs_cf(it->second, v.fs_cf_lin); // rejects values > 0
                        continue; // untargeted entries only apply where this target blocks
                    }
                    f.set_fs_cf(it->second, v.fs_cf_lin);
                }
                break;
            }
            }
            per_target.push_back(std::move(f));
        }
        return combine_factors(per_target);
    }

    AssembledChannels step_assemble(const ChannelRealization &env, const CouplingFactors &factors,
                                    const ChannelRealization &noncoupled)
    {
        AssembledChannels out;
        out.background = background_channel(env, factors);
        out.coupled = coupled_target_channel(env, factors);
        out.sensing = assemble_isac_channel(out.background, out.coupled, noncoupled);
        return out;
    }

    namespace
    {
        template <typename F>
        auto in_step(const char *step, F &&fn)
        {
            try
            {
                return fn();
            }
            catch (const StepError &)
            {
                throw;
            }
            catch (const Error &e)
            {
                throw StepError(step, e, exit_code_for(e));
            }
        }
    }

    PipelineResult run_pipeline(const ScenarioConfig &cfg)
    {
        PipelineResult r;
        r.environment = in_step("env", [&] { return step_environment(cfg); });
        r.blockage = in_step("br_cf", [&] { return step_br_cf(cfg, r.environment); });
        r.noncoupled = in_step("tar2", [&] { return step_target(cfg); });
        r.factors = in_step("fs_cf", [&] { return step_fs_cf(cfg, r.environment, r.blockage); });
        auto assembled = in_step("assemble", [&] { return step_assemble(r.environment, r.factors, r.noncoupled); });
        r.background = std::move(assembled.background);
        r.coupled = std::move(assembled.coupled);
        r.sensing = std::move(assembled.sensing);
        return r;
    }

    PadpGrid scenario_padp(const ScenarioConfig &cfg, const ChannelRealization &real)
    {
        const ChannelRealization *src = &real;
        ChannelRealization truncated;
        if (cfg.axes.truncate_range_m)
        {
            truncated = truncate_range(real, *cfg.axes.truncate_range_m);
            src = &truncated;
        }
        return padp_from_realization(*src, cfg.axes.angle_deg, cfg.axes.delay_s, cfg.axes.out_of_range);
    }

    RunManifest make_manifest(const fs::path &config_path, const fs::path &output_dir)
    {
        RunManifest m;
        m.config_path = config_path;
        m.config = load_config(config_path);
        m.output_dir = output_dir;
        if (const char *env_seed = std::getenv("ISAC_SEED"); env_seed && *env_seed)
        {
            std::uint64_t seed = 0;
            const std::string_view text(env_seed);
            const auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
            if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
                throw ConfigError("ISAC_SEED must be an unsigned 64-bit integer", "E_SEED");
            m.config.env.rng_seed = seed;
        }
        m.rng_seed = m.config.env.rng_seed;
        return m;
    }

    namespace
    {
        std::string paths_text(const ChannelRealization &r)
        {
            std::ostringstream os;
            write_paths_csv(os, r.paths);
            return os.str();
        }

        std::string padp_text(const PadpGrid &g)
        {
            std::ostringstream os;
            write_padp_csv(os, g);
            return os.str();
        }

        json ratio(double num, double den)
        {
            return den > 0.0 ? json(num / den) : json(nullptr);
        }
    }

    std::map<std::string, std::string> render_outputs(const RunManifest &manifest, const PipelineResult &r)
    {
        const auto &cfg = manifest.config;
        std::map<std::string, std::string> files;

        const std::pair<const char *, const ChannelRealization *> channels[] = {
            {"environment", &r.environment},
            {"background", &r.background},
            {"target_coupled", &r.coupled},
            {"target_noncoupled", &r.noncoupled},
            {"sensing", &r.sensing}};

        std::map<std::string, PadpGrid> padps;
        for (const auto &[name, real] : channels)
        {
            files[std::string(name) + "_paths.csv"] = paths_text(*real);
            auto g = scenario_padp(cfg, *real);
            files[std::string(name) + "_padp.csv"] = padp_text(g);
            padps.emplace(name, std::move(g));
        }
        {
            std::ostringstream os;
            write_coupling_csv(os, r.factors);
            files["coupling.csv"] = os.str();
        }

        nlohmann::ordered_json report;
        report["name"] = cfg.name;
        report["version"] = manifest.version;
        report["rng_seed"] = manifest.rng_seed;
        report["steps"] = manifest.steps;
        report["coupling_mode"] = std::string(to_string(cfg.coupling.mode));
        report["coupling_level"] = cfg.coupling.level == CouplingLevel::PerPath ? "per_path" : "per_cluster";

        auto &counts = report["path_counts"];
        auto &power = report["power"];
        for (const auto &[name, real] : channels)
        {
            counts[name] = real->paths.size();
            power[name] = total_power(*real);
        }
        const double p_sensing = total_power(r.sensing);
        const double p_target = total_power(r.coupled) + total_power(r.noncoupled);

        // shares on the configured PADP grid (after truncation)
        const auto &env_g = padps.at("environment");
        const auto &sen_g = padps.at("sensing");
        const double g_target = padps.at("target_coupled").total() + padps.at("target_noncoupled").total();
        nlohmann::ordered_json shares;
        shares["target_of_sensing"] = ratio(p_target, p_sensing);
        shares["background_of_sensing"] = ratio(total_power(r.background), p_sensing);
        shares["coupled_of_target"] = ratio(total_power(r.coupled), p_target);
        shares["noncoupled_of_target"] = ratio(total_power(r.noncoupled), p_target);

        const Vec3 los = cfg.env.rx.location_m - cfg.env.tx.location_m;
        const auto los_a = nearest_bin(cfg.axes.angle_deg, direction_angles(los)[0]);
        const auto los_d = nearest_bin(cfg.axes.delay_s, los.norm() / speed_of_light);
        if (los_a && los_d)
        {
            // target cell power from the combined target grid: phasor sums stay per origin
            std::vector<double> tgt(env_g.values().size());
            for (std::size_t i = 0; i < tgt.size(); ++i)
                tgt[i] = padps.at("target_coupled").values()[i] + padps.at("target_noncoupled").values()[i];
            const std::size_t cell = *los_a * env_g.delays() + *los_d;
            shares["los_cell_of_environment"] = ratio(env_g.at(*los_a, *los_d), env_g.total());
            shares["los_cell_of_target"] = ratio(tgt[cell], g_target);
            shares["los_cell_change_db"] =
                env_g.at(*los_a, *los_d) > 0.0 && sen_g.at(*los_a, *los_d) > 0.0
                    ? json(10.0 * std::log10(sen_g.at(*los_a, *los_d) / env_g.at(*los_a, *los_d)))
                    : json(nullptr);
        }
        else
        {
            shares["los_cell_of_environment"] = nullptr;
            shares["los_cell_of_target"] = nullptr;
            shares["los_cell_change_db"] = nullptr;
        }
        report["shares"] = shares;

        report["blocked_entries"] = r.factors.blocked_count();
        auto regions = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < r.blockage.regions.size(); ++k)
        {
            const auto &b = r.blockage.regions[k];
            nlohmann::ordered_json j;
            j["target"] = cfg.targets[k].st.id;
            j["az_lo_deg"] = b.az_lo_deg;
            j["az_hi_deg"] = b.az_hi_deg;
            j["delay_min_s"] = b.delay_min_s;
            regions.push_back(j);
        }
        report["blockage_regions"] = regions;

        if (cfg.reference_padp_csv)
        {
            const auto ref = load_padp_csv(*cfg.reference_padp_csv);
            if (!ref.same_axes(sen_g))
                throw DimensionError("reference PADP does not share the scenario axes");
            const auto si = similarity_report(ref, sen_g);
            nlohmann::ordered_json sim;
            sim["si_joint"] = si.si_joint;
            sim["si_delay"] = si.si_delay;
            sim["si_angle"] = si.si_angle;
            report["similarity"] = sim;
        }
        else
        {
            report["similarity"] = nullptr;
        }
        files["report.json"] = report.dump(2) + "\n";
        return files;
    }

    std::vector<std::string> run_scenario(const RunManifest &manifest)
    {
        const auto result = run_pipeline(manifest.config);
        std::map<std::string, std::string> files;
        try
        {
            files = render_outputs(manifest, result);
        }
        catch (const Error &e)
        {
            throw StepError("report", e, exit_code_for(e));
        }

        std::error_code ec;
        fs::create_directories(manifest.output_dir, ec);
        if (ec)
            throw IoError("cannot create '" + manifest.output_dir.string() + "': " + ec.message());
        std::vector<std::string> names;
        for (const auto &[name, content] : files)
        {
            write_text_file(manifest.output_dir / name, content);
            names.push_back(name);
        }
        return names;
    }
}
