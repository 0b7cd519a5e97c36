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

// isacsim command-line front end.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "isac/analysis.hpp"
#include "isac/io.hpp"
#include "isac/scenario.hpp"

namespace fs = std::filesystem;
using namespace isac;

namespace
{
    // Writes to `file`, or stdout when empty.
    void emit(const std::string &file, const std::string &content)
    {
        if (file.empty() || file == "-")
            std::cout << content << std::flush;
        else
            write_text_file(file, content);
    }

    ChannelRealization realization_from_csv(const ScenarioConfig &cfg, const std::string &file, ChannelKind kind)
    {
        ChannelRealization r;
        r.state = kind == ChannelKind::Environment ? ChannelState::EnvOnly : ChannelState::WithTarget;
        r.kind = kind;
        r.tx_antenna_id = cfg.env.tx_antenna_id;
        r.rx_antenna_id = cfg.env.rx_antenna_id;
        r.timestamp_s = cfg.timestamp_s;
        r.paths = load_paths_csv(file);
        return r;
    }

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

    double json_extent(const nlohmann::json &screen, const char *key)
    {
        const auto it = screen.find(key);
        if (it == screen.end())
            return 0.0;
        if (it->is_null() || (it->is_string() && it->get<std::string>() == "inf"))
            return std::numeric_limits<double>::infinity();
        if (!it->is_number())
            throw ConfigError(std::string("screen.") + key + " must be a number, null or \"inf\"", "E_SCHEMA_TYPE");
        return it->get<double>();
    }

    Vec3 json_vec3(const nlohmann::json &j, const char *key, Vec3 fallback)
    {
        const auto it = j.find(key);
        if (it == j.end())
            return fallback;
        if (!it->is_array() || it->size() != 3)
            throw ConfigError(std::string(key) + " must be [x, y, z]", "E_SCHEMA_TYPE");
        return {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>()};
    }

    std::optional<AntennaConfig> json_antenna(const nlohmann::json &j, const char *key, const Vec3 &loc,
                                              const char *fallback)
    {
        const std::string kind = j.value(key, std::string(fallback));
        if (kind == "horn")
            return AntennaConfig::horn_105ghz(loc);
        if (kind == "omni")
            return AntennaConfig::omni_105ghz(loc);
        if (kind == "isotropic")
            return std::nullopt;
        throw ConfigError(std::string(key) + " must be horn, omni or isotropic", "E_ANTENNA_PATTERN");
    }

    // Geometry sweep for `diffract`.
    std::string run_diffract(const std::string &geometry_file, bool with_oracle)
    {
        nlohmann::json g;
        try
        {
            g = nlohmann::json::parse(read_text_file(geometry_file));
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(geometry_file + ": " + e.what(), "E_JSON_PARSE");
        }
        const double carrier = g.value("carrier_hz", 105e9);
        if (!(carrier > 0.0))
            throw ConfigError("carrier_hz must be > 0", "E_CARRIER_RANGE");
        const double lambda = speed_of_light / carrier;
        const Vec3 tx = json_vec3(g, "tx_m", {0.0, 0.0, 1.4});
        const Vec3 rx = json_vec3(g, "rx_m", {0.0, 24.0, 1.4});
        const auto los = direction_angles(rx - tx);
        const double length = g.value("path_length_m", (rx - tx).norm());
        const double zod = g.value("zod_deg", los[1]);

        if (!g.contains("screen") || !g["screen"].is_object())
            throw ConfigError("geometry needs a screen object", "E_SCHEMA_MISSING");
        const auto &s = g["screen"];
        ScreenGeometry screen{json_vec3(s, "center_m", {0.0, 4.0, 1.4}), json_extent(s, "w1_m"), json_extent(s, "w2_m"),
                              json_extent(s, "h1_m"), json_extent(s, "h2_m")};

        std::vector<double> aods{los[0]};
        if (g.contains("aod_deg"))
        {
            const auto &a = g["aod_deg"];
            if (a.is_number())
                aods = {a.get<double>()};
            else if (a.is_array())
                aods = a.get<std::vector<double>>();
            else
                aods = uniform_axis(a.at("start").get<double>(), a.at("stop").get<double>(), a.at("step").get<double>());
        }
        const std::string model = g.value("model", std::string("4kedg"));
        if (model != "4kedg" && model != "4ked")
            throw ConfigError("model must be 4kedg or 4ked", "E_SCHEMA_ENUM");
        const auto tx_ant = json_antenna(g, "tx_antenna", tx, "horn");
        const auto rx_ant = json_antenna(g, "rx_antenna", rx, "omni");

        QuadratureSettings quad;
        if (g.contains("quadrature"))
        {
            const auto &q = g["quadrature"];
            quad.fresnel_zones = q.value("fresnel_zones", quad.fresnel_zones);
            quad.rel_tol = q.value("rel_tol", quad.rel_tol);
            quad.max_refinements = q.value("max_refinements", quad.max_refinements);
        }

        std::ostringstream os;
        os << "aod_deg,attenuation_db" << (with_oracle ? ",oracle_db" : "") << '\n';
        for (const double aod : aods)
        {
            const auto t = equivalent_translation(tx, aod, zod, length, screen, lambda);
            double a_db = 0.0;
            if (model == "4ked" || (!tx_ant && !rx_ant))
            {
                a_db = fourked_attenuation(t.link, t.screen);
            }
            else
            {
                const auto back = direction_angles(t.link.l1_pos_m - t.link.l2_pos_m);
                EdgeGainSet gains;
                const auto steered_tx = tx_ant ? steer(*tx_ant, aod, zod) : AntennaConfig{};
                const auto steered_rx = rx_ant ? steer(*rx_ant, back[0], back[1]) : AntennaConfig{};
                const auto full = edge_gains(t.link, t.screen, steered_tx, steered_rx);
                for (std::size_t e = 0; e < 4; ++e)
                {
                    gains.g_r[e] = tx_ant ? full.g_r[e] : 1.0;
                    gains.g_s[e] = rx_ant ? full.g_s[e] : 1.0;
                }
                a_db = fourkedg_attenuation(t.link, t.screen, gains);
            }
            os << format_number(aod) << ',' << format_number(capped_db(a_db));
            if (with_oracle)
                os << ',' << format_number(capped_db(fresnel_kirchhoff_field(t.link, t.screen, quad).attenuation_db()));
            os << '\n';
        }
        return os.str();
    }

    std::vector<double> read_samples(const std::string &file)
    {
        std::istringstream in(read_text_file(file));
        std::vector<double> out;
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line))
        {
            ++n;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ','))
            {
                const auto b = cell.find_first_not_of(" \t\r");
                if (b == std::string::npos)
                    continue;
                cell = cell.substr(b, cell.find_last_not_of(" \t\r") - b + 1);
                try
                {
                    std::size_t used = 0;
                    const double v = std::stod(cell, &used);
                    if (used != cell.size())
                        throw std::invalid_argument(cell);
                    out.push_back(v);
                }
                catch (const std::exception &)
                {
                    if (n == 1 && out.empty())
                        continue; // header
                    throw DataError(file + ":" + std::to_string(n) + ": not a number: '" + cell + "'");
                }
            }
        }
        return out;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"isacsim: coupled ISAC channel simulation and analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    std::string config, output, env_csv, bac_csv, tar1_csv, tar2_csv, padp_out, coupling_out, geometry;
    std::string mea_csv, model_csv, e1_csv, e0_csv, samples_csv, ecdf_out;
    double delay_lo = 0.0, delay_hi = 0.0, floor_db = -300.0;
    bool oracle = false;

    auto *validate = app.add_subcommand("validate", "Check a scenario config and list diagnostics");
    validate->add_option("config", config, "Scenario JSON")->required();

    auto *gen_env = app.add_subcommand("gen-env", "Generate the environment channel (state e0)");
    gen_env->add_option("config", config, "Scenario JSON")->required();
    gen_env->add_option("-o,--output", output, "Path CSV (default stdout)");
    gen_env->add_option("--padp", padp_out, "Also write the PADP CSV");

    auto *couple = app.add_subcommand("couple", "Blockage region, BR-CF and FS-CF for an environment channel");
    couple->add_option("config", config, "Scenario JSON")->required();
    couple->add_option("--env", env_csv, "Environment path CSV (default: generated from the config)");
    couple->add_option("-o,--output", output, "Coupling CSV (default stdout)");
    couple->add_option("--background", bac_csv, "Write the background channel");
    couple->add_option("--coupled", tar1_csv, "Write the coupled target channel");

    auto *gen_target = app.add_subcommand("gen-target", "Non-coupled target channel by link concatenation");
    gen_target->add_option("config", config, "Scenario JSON")->required();
    gen_target->add_option("-o,--output", output, "Path CSV (default stdout)");

    auto *assemble = app.add_subcommand("assemble", "Union of background, coupled and non-coupled paths");
    assemble->add_option("--config", config, "Scenario JSON (antenna ids, timestamp, axes)")->required();
    assemble->add_option("--background", bac_csv, "Background path CSV")->required();
    assemble->add_option("--coupled", tar1_csv, "Coupled target path CSV")->required();
    assemble->add_option("--noncoupled", tar2_csv, "Non-coupled target path CSV")->required();
    assemble->add_option("-o,--output", output, "Sensing path CSV (default stdout)");
    assemble->add_option("--padp", padp_out, "Also write the sensing PADP CSV");

    auto *run = app.add_subcommand("run", "Full pipeline: env, br_cf, tar2, fs_cf, assemble");
    run->add_option("config", config, "Scenario JSON")->required();
    run->add_option("-o,--output", output, "Output directory")->required();

    auto *diffract = app.add_subcommand("diffract", "4KED/4KED-G attenuation sweep over AoD");
    diffract->add_option("geometry", geometry, "Geometry JSON")->required();
    diffract->add_option("-o,--output", output, "CSV (default stdout)");
    diffract->add_flag("--oracle", oracle, "Add the Fresnel-Kirchhoff quadrature column");

    auto *analyze = app.add_subcommand("analyze", "Channel comparison");
    analyze->require_subcommand(1);
    auto *si = analyze->add_subcommand("si", "Similarity Index between two PADP CSVs");
    si->add_option("measured", mea_csv, "Reference PADP CSV")->required();
    si->add_option("model", model_csv, "Model PADP CSV")->required();
    si->add_option("-o,--output", output, "JSON (default stdout)");

    auto *extract = app.add_subcommand("extract-cf", "Per-angle FS-CF from an e1/e0 PADP pair");
    extract->add_option("e1", e1_csv, "PADP CSV with the target")->required();
    extract->add_option("e0", e0_csv, "PADP CSV without the target")->required();
    extract->add_option("--delay-lo", delay_lo, "Window start [s]")->required();
    extract->add_option("--delay-hi", delay_hi, "Window end [s]")->required();
    extract->add_option("--floor-db", floor_db, "e0 power floor [dB]");
    extract->add_option("-o,--output", output, "CSV (default stdout)");

    auto *fit = app.add_subcommand("fit-normal", "Normal fit and KS test of dB samples");
    fit->add_option("samples", samples_csv, "Numbers separated by commas or newlines")->required();
    fit->add_option("-o,--output", output, "JSON (default stdout)");
    fit->add_option("--ecdf", ecdf_out, "Write the empirical CDF as CSV");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (validate->parsed())
        {
            const auto res = validate_config(config);
            for (const auto &d : res.diagnostics)
                std::cerr << d.code << ' ' << d.pointer << ": " << d.message << '\n';
            if (res.ok())
            {
                std::cout << "ok\n";
                return 0;
            }
            const bool io = !res.diagnostics.empty() && res.diagnostics.front().code == "E_IO";
            return io ? 4 : 2;
        }
        if (gen_env->parsed())
        {
            const auto m = make_manifest(config, ".");
            const auto env = step_environment(m.config);
            emit(output, paths_text(env));
            if (!padp_out.empty())
                write_text_file(padp_out, padp_text(scenario_padp(m.config, env)));
            return 0;
        }
        if (couple->parsed())
        {
            const auto m = make_manifest(config, ".");
            const auto env = env_csv.empty() ? step_environment(m.config)
                                             : realization_from_csv(m.config, env_csv, ChannelKind::Environment);
            const auto br = step_br_cf(m.config, env);
            const auto factors = step_fs_cf(m.config, env, br);
            std::ostringstream os;
            write_coupling_csv(os, factors);
            emit(output, os.str());
            if (!bac_csv.empty())
                write_text_file(bac_csv, paths_text(background_channel(env, factors)));
            if (!tar1_csv.empty())
                write_text_file(tar1_csv, paths_text(coupled_target_channel(env, factors)));
            return 0;
        }
        if (gen_target->parsed())
        {
            const auto m = make_manifest(config, ".");
            emit(output, paths_text(step_target(m.config)));
            return 0;
        }
        if (assemble->parsed())
        {
            const auto cfg = load_config(config);
            const auto bac = realization_from_csv(cfg, bac_csv, ChannelKind::Background);
            const auto tar1 = realization_from_csv(cfg, tar1_csv, ChannelKind::TargetCoupled);
            const auto tar2 = realization_from_csv(cfg, tar2_csv, ChannelKind::TargetNonCoupled);
            const auto sensing = assemble_isac_channel(bac, tar1, tar2);
            emit(output, paths_text(sensing));
            if (!padp_out.empty())
                write_text_file(padp_out, padp_text(scenario_padp(cfg, sensing)));
            return 0;
        }
        if (run->parsed())
        {
            const auto m = make_manifest(config, output);
            for (const auto &name : run_scenario(m))
                std::cout << (fs::path(output) / name).string() << '\n';
            return 0;
        }
        if (diffract->parsed())
        {
            emit(output, run_diffract(geometry, oracle));
            return 0;
        }
        if (si->parsed())
        {
            const auto rep = similarity_report(load_padp_csv(mea_csv), load_padp_csv(model_csv));
            auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
            nlohmann::ordered_json j;
            j["si_joint"] = round4(rep.si_joint);
            j["si_delay"] = round4(rep.si_delay);
            j["si_angle"] = round4(rep.si_angle);
            emit(output, j.dump(2) + "\n");
            return 0;
        }
        if (extract->parsed())
        {
            const auto e1 = load_padp_csv(e1_csv);
            const auto e0 = load_padp_csv(e0_csv);
            const auto cf = extract_fs_cf(e1, e0, delay_lo, delay_hi, floor_db);
            std::ostringstream os;
            os << "aod_deg,fs_cf_db,defined\n";
            for (std::size_t a = 0; a < cf.size(); ++a)
                os << format_number(e0.angle_axis()[a]) << ',' << (cf[a] ? format_number(*cf[a]) : "") << ','
                   << (cf[a] ? 1 : 0) << '\n';
            emit(output, os.str());
            return 0;
        }
        if (fit->parsed())
        {
            const auto samples = read_samples(samples_csv);
            const auto nf = fit_normal(samples);
            nlohmann::ordered_json j;
            j["mean_db"] = nf.mean_db;
            j["var_db2"] = nf.var_db2;
            j["sample_count"] = nf.sample_count;
            j["ks_statistic"] = nf.ks_statistic;
            j["ks_pvalue"] = nf.ks_pvalue ? nlohmann::ordered_json(*nf.ks_pvalue) : nlohmann::ordered_json(nullptr);
            j["degenerate"] = nf.degenerate;
            emit(output, j.dump(2) + "\n");
            if (!ecdf_out.empty())
            {
                std::ostringstream os;
                os << "value_db,cdf\n";
                for (const auto &[v, f] : empirical_cdf(samples))
                    os << format_number(v) << ',' << format_number(f) << '\n';
                write_text_file(ecdf_out, os.str());
            }
            return 0;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "isacsim: error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 0;
}
