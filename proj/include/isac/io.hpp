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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "isac/core.hpp"
#include "isac/coupling.hpp"
#include "isac/target.hpp"

namespace isac
{
    /// Shortest text that reads back to the same double ("%.17g").
    std::string format_number(double value);

    inline constexpr const char *path_csv_header =
        "cluster,path,origin,amp_re,amp_im,delay_s,aod_deg,zod_deg,aoa_deg,zoa_deg,doppler_hz,phase_rad";

    void write_paths_csv(std::ostream &os, const std::vector<PathComponent> &paths);
    std::vector<PathComponent> read_paths_csv(std::istream &is, const std::string &source = "<stream>");

    /// First row: empty corner cell then the delay axis; first column: the angle axis.
    void write_padp_csv(std::ostream &os, const PadpGrid &grid);
    PadpGrid read_padp_csv(std::istream &is, const std::string &source = "<stream>");

    /// `cluster,path,br_cf,fs_cf_lin,fs_cf_db`; dB values are floored at -200.
    void write_coupling_csv(std::ostream &os, const CouplingFactors &factors);
    CouplingFactors read_coupling_csv(std::istream &is, CouplingLevel level, const std::string &source = "<stream>");

    /// `theta_in,phi_in,theta_out,phi_out,sigma_m2`.
    std::vector<RcsSample> read_rcs_csv(std::istream &is, const std::string &source = "<stream>");

    /// File helpers; throw IoError when the file cannot be opened or written.
    std::string read_text_file(const std::filesystem::path &path);
    void write_text_file(const std::filesystem::path &path, const std::string &content);

    std::vector<PathComponent> load_paths_csv(const std::filesystem::path &path);
    PadpGrid load_padp_csv(const std::filesystem::path &path);
}
