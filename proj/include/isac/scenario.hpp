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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isac/core.hpp"
#include "isac/coupling.hpp"
#include "isac/diffraction.hpp"
#include "isac/error.hpp"
#include "isac/gbsm.hpp"
#include "isac/target.hpp"

namespace isac
{
    inline constexpr const char *tool_version = "1.0.0";

    struct AxesConfig
    {
        std::vector<double> angle_deg;
        std::vector<double> delay_s;
        std::optional<double> truncate_range_m = 75.0;
        OutOfRange out_of_range = OutOfRange::Drop;
    };

    enum class CouplingMode
    {
        Los4kedg,
        NlosNormal,
        Explicit
    };

    std::string_view to_string(CouplingMode mode);

    /// Explicit FS-CF value; without `target` it applies to every target.
    struct ExplicitFsCf
    {
        std::optional<int> target;
        int cluster = 1;
        int path = 0;
        double fs_cf_lin = 0.0;
    };

    struct CouplingConfig
    {
        CouplingMode mode = CouplingMode::Los4kedg;
        CouplingLevel level = CouplingLevel::PerPath;
        bool majority = false;
        double br_margin_kappa = default_br_kappa;
        NormalDb nlos;
        std::vector<ExplicitFsCf> explicit_values;
        double default_fs_cf_lin = 0.0; // explicit mode, blocked entries not listed
    };

    struct TargetConfig
    {
        SensingTarget st;
        std::optional<std::vector<PathComponent>> tx_link; // default: straight Tx -> ST leg
        std::optional<std::vector<PathComponent>> rx_link; // default: straight ST -> Rx leg
        std::size_t top_k = 0;
    };

    struct ScenarioConfig
    {
        std::string name = "scenario";
        EnvironmentSpec env;
        double timestamp_s = 0.0;
        AxesConfig axes;
        std::vector<TargetConfig> targets;
        CouplingConfig coupling;
        std::optional<std::filesystem::path> reference_padp_csv;
    };

    /// Problem found in a config document, located by JSON pointer.
    struct Diagnostic
    {
        std::string code;
        std::string pointer;
        std::string message;
    };

    struct ValidationResult
    {
        std::optional<ScenarioConfig> config;
        std::vector<Diagnostic> diagnostics;

        bool ok() const { return config.has_value() && diagnostics.empty(); }
    };

    /// Parses and cross-checks a config. Relative file references resolve
    /// against `base_dir`.
    ValidationResult validate_config_text(std::string_view json_text, const std::filesystem::path &base_dir);
    ValidationResult validate_config(const std::filesystem::path &config_path);

    /// Throws ConfigError carrying the first diagnostic.
    ScenarioConfig load_config(const std::filesystem::path &config_path);

    /// A module error annotated with the pipeline step that raised it.
    class StepError : public Error
    {
    public:
        StepError(std::string step, const Error &cause, int exit_code)
            : Error(cause.code(), step + ": " + cause.what()), step_(std::move(step)), exit_code_(exit_code) {}

        const std::string &step() const noexcept { return step_; }
        int exit_code() const noexcept { return exit_code_; }

    private:
        std::string step_;
        int exit_code_;
    };

    /// 0 success, 2 config, 3 numeric or other module error, 4 I/O.
    int exit_code_for(const std::exception &e);

    // Individual pipeline steps; `run_pipeline` chains them.
    ChannelRealization step_environment(const ScenarioConfig &cfg);

    struct BlockageResult
    {
        std::vector<BlockageRegion> regions; // one per target
        std::vector<CouplingFactors> factors;
    };

    BlockageResult step_br_cf(const ScenarioConfig &cfg, const ChannelRealization &env);
    ChannelRealization step_target(const ScenarioConfig &cfg);
    CouplingFactors step_fs_cf(const ScenarioConfig &cfg, const ChannelRealization &env, const BlockageResult &br);

    struct AssembledChannels
    {
        ChannelRealization background;
        ChannelRealization coupled;
        ChannelRealization sensing;
    };

    AssembledChannels step_assemble(const ChannelRealization &env, const CouplingFactors &factors,
                                    const ChannelRealization &noncoupled);

    struct PipelineResult
    {
        ChannelRealization environment, background, coupled, noncoupled, sensing;
        BlockageResult blockage;
        CouplingFactors factors;
    };

    inline constexpr const char *pipeline_steps[] = {"env", "br_cf", "tar2", "fs_cf", "assemble"};

    /// env -> br_cf -> tar2 -> fs_cf -> assemble. Errors come back as StepError.
    PipelineResult run_pipeline(const ScenarioConfig &cfg);

    /// PADP of a realization on the configured axes, after the optional range truncation.
    PadpGrid scenario_padp(const ScenarioConfig &cfg, const ChannelRealization &real);

    struct RunManifest
    {
        std::filesystem::path config_path;
        ScenarioConfig config;
        std::filesystem::path output_dir;
        std::uint64_t rng_seed = 0;
        std::string version = tool_version;
        std::vector<std::string> steps{std::begin(pipeline_steps), std::end(pipeline_steps)};
    };

    /// Loads the config; `ISAC_SEED` (if set) replaces the seed.
    RunManifest make_manifest(const std::filesystem::path &config_path, const std::filesystem::path &output_dir);

    /// File name -> content of every output. Deterministic in the manifest.
    std::map<std::string, std::string> render_outputs(const RunManifest &manifest, const PipelineResult &result);

    /// Runs the pipeline and writes all outputs; returns the written file names.
    std::vector<std::string> run_scenario(const RunManifest &manifest);
}
