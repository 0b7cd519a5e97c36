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

#include "isac/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "isac/diffraction.hpp"
#include "isac/error.hpp"

namespace isac
{
    std::string format_number(double value)
    {
        if (value == 0.0)
            return "0"; // also folds -0
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        return buf;
    }

    namespace
    {
        std::string_view trim(std::string_view s)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        }

        std::vector<std::string_view> split(std::string_view line)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            while (true)
            {
                const auto pos = line.find(',', start);
                out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

        struct LineReader
        {
            LineReader(std::istream &in, std::string src) : is(in), source(std::move(src)) {}

            std::istream &is;
            std::string source;
            std::size_t line_no = 0;
            std::string line;

            // Next non-empty line, or false at end of input.
            bool next()
            {
                while (std::getline(is, line))
                {
                    ++line_no;
                    if (!trim(line).empty())
                        return true;
                }
                return false;
            }

            [[noreturn]] void fail(const std::string &what) const
            {
                throw DataError(source + ":" + std::to_string(line_no) + ": " + what);
            }

            double number(std::string_view cell) const
            {
                double v = 0.0;
                const auto *end = cell.data() + cell.size();
                const auto res = std::from_chars(cell.data(), end, v);
                if (res.ec != std::errc{} || res.ptr != end)
                {
                    if (cell == "inf" || cell == "+inf")
                        return std::numeric_limits<double>::infinity();
                    if (cell == "-inf")
                        return -std::numeric_limits<double>::infinity();
                    fail("not a number: '" + std::string(cell) + "'");
                }
                return v;
            }

            int integer(std::string_view cell) const
            {
                int v = 0;
                const auto *end = cell.data() + cell.size();
                const auto res = std::from_chars(cell.data(), end, v);
                if (res.ec != std::errc{} || res.ptr != end)
                    fail("not an integer: '" + std::string(cell) + "'");
                return v;
            }

            void expect_header(std::string_view header)
            {
                if (!next())
                    fail("empty file");
                if (trim(line) != header)
                    fail("expected header '" + std::string(header) + "'");
            }
        };
    }

    void write_paths_csv(std::ostream &os, const std::vector<PathComponent> &paths)
    {
        os << path_csv_header << '\n';
        for (const auto &p : paths)
        {
            os << p.cluster_index << ',' << p.path_index << ',' << to_string(p.origin) << ','
               << format_number(p.amplitude.real()) << ',' << format_number(p.amplitude.imag()) << ','
               << format_number(p.delay_s) << ',' << format_number(p.aod_deg) << ','
               << format_number(p.zod_deg) << ',' << format_number(p.aoa_deg) << ','
               << format_number(p.zoa_deg) << ',' << format_number(p.doppler_hz) << ','
               << format_number(p.initial_phase_rad) << '\n';
        }
    }

    std::vector<PathComponent> read_paths_csv(std::istream &is, const std::string &source)
    {
        LineReader r(is, source);
        r.expect_header(path_csv_header);
        std::vector<PathComponent> paths;
        while (r.next())
        {
            const auto c = split(r.line);
            if (c.size() != 12)
                r.fail("expected 12 columns, got " + std::to_string(c.size()));
            PathComponent p;
            p.cluster_index = r.integer(c[0]);
            p.path_index = r.integer(c[1]);
            try
            {
                p.origin = origin_from_string(c[2]);
            }
            catch (const Error &e)
            {
                r.fail(e.what());
            }
            p.amplitude = {r.number(c[3]), r.number(c[4])};
            p.delay_s = r.number(c[5]);
            p.aod_deg = r.number(c[6]);
            p.zod_deg = r.number(c[7]);
            p.aoa_deg = r.number(c[8]);
            p.zoa_deg = r.number(c[9]);
            p.doppler_hz = r.number(c[10]);
            p.initial_phase_rad = r.number(c[11]);
            paths.push_back(p);
        }
        return paths;
    }

    void write_padp_csv(std::ostream &os, const PadpGrid &grid)
    {
        for (const double d : grid.delay_axis())
            os << ',' << format_number(d);
        os << '\n';
        for (std::size_t a = 0; a < grid.angles(); ++a)
        {
            os << format_number(grid.angle_axis()[a]);
            for (std::size_t d = 0; d < grid.delays(); ++d)
                os << ',' << format_number(grid.at(a, d));
            os << '\n';
        }
    }

    PadpGrid read_padp_csv(std::istream &is, const std::string &source)
    {
        LineReader r(is, source);
        if (!r.next())
            r.fail("empty file");
        const auto head = split(r.line);
        if (head.size() < 2 || !head[0].empty())
            r.fail("first row must be an empty corner cell followed by the delay axis");
        std::vector<double> delays;
        for (std::size_t i = 1; i < head.size(); ++i)
            delays.push_back(r.number(head[i]));

        std::vector<double> angles, power;
        while (r.next())
        {
            const auto c = split(r.line);
            if (c.size() != head.size())
                r.fail("row has " + std::to_string(c.size()) + " cells, header has " + std::to_string(head.size()));
            angles.push_back(r.number(c[0]));
            for (std::size_t i = 1; i < c.size(); ++i)
                power.push_back(r.number(c[i]));
        }
        try
        {
            return PadpGrid(std::move(angles), std::move(delays), std::move(power));
        }
        catch (const Error &e)
        {
            throw DataError(source + ": " + e.what());
        }
    }

    void write_coupling_csv(std::ostream &os, const CouplingFactors &factors)
    {
        os << "cluster,path,br_cf,fs_cf_lin,fs_cf_db\n";
        for (std::size_t i = 0; i < factors.size(); ++i)
        {
            const double lin = factors.fs_cf_lin()[i];
            const double db = lin > 0.0 ? -capped_db(-10.0 * std::log10(lin)) : -attenuation_cap_db;
            os << factors.keys()[i].cluster << ',' << factors.keys()[i].path << ','
               << static_cast<int>(factors.br_cf()[i]) << ',' << format_number(lin) << ',' << format_number(db)
               << '\n';
        }
    }

    CouplingFactors read_coupling_csv(std::istream &is, CouplingLevel level, const std::string &source)
    {
        LineReader r(is, source);
        r.expect_header("cluster,path,br_cf,fs_cf_lin,fs_cf_db");
        std::vector<PathKey> keys;
        std::vector<std::uint8_t> b;
        std::vector<double> a;
        while (r.next())
        {
            const auto c = split(r.line);
            if (c.size() != 5)
                r.fail("expected 5 columns");
            keys.push_back({r.integer(c[0]), r.integer(c[1])});
            const int bv = r.integer(c[2]);
            if (bv != 0 && bv != 1)
                r.fail("br_cf must be 0 or 1");
            b.push_back(static_cast<std::uint8_t>(bv));
            a.push_back(r.number(c[3]));
        }
        return {level, std::move(keys), std::move(b), std::move(a)};
    }

    std::vector<RcsSample> read_rcs_csv(std::istream &is, const std::string &source)
    {
        LineReader r(is, source);
        r.expect_header("theta_in,phi_in,theta_out,phi_out,sigma_m2");
        std::vector<RcsSample> out;
        while (r.next())
        {
            const auto c = split(r.line);
            if (c.size() != 5)
                r.fail("expected 5 columns");
            out.push_back({r.number(c[0]), r.number(c[1]), r.number(c[2]), r.number(c[3]), r.number(c[4])});
        }
        return out;
    }

    std::string read_text_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_text_file(const std::filesystem::path &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write '" + path.string() + "'");
        out << content;
        if (!out.flush())
            throw IoError("write failed for '" + path.string() + "'");
    }

    std::vector<PathComponent> load_paths_csv(const std::filesystem::path &path)
    {
        std::istringstream in(read_text_file(path));
        return read_paths_csv(in, path.string());
    }

    PadpGrid load_padp_csv(const std::filesystem::path &path)
    {
        std::istringstream in(read_text_file(path));
        return read_padp_csv(in, path.string());
    }
}
