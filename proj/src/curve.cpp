// SPDX-License-Identifier: Apache-2.0
//
// rislink: link-level simulation of RIS-aided high-mobility links
// Copyright (C) 2026 The rislink authors
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

#include "rislink/curve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rislink
{
    namespace
    {
        std::string fmt(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.8e", v);
            return buf;
        }

        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                out.push_back(cell);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        double parse_double(const std::string &s)
        {
            if (s == "nan")
                return std::nan("");
            if (s == "inf")
                return INFINITY;
            if (s == "-inf")
                return -INFINITY;
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw std::invalid_argument("bad number '" + s + "'");
            return v;
        }

        bool ends_with(const std::string &s, const std::string &suffix)
        {
            return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
        }
    }

    const Series &CurveResult::find(const std::string &name) const
    {
        for (const auto &s : series)
            if (s.name == name)
                return s;
        throw std::invalid_argument("No series named '" + name + "'.");
    }

    void CurveResult::validate() const
    {
        for (const auto &s : series)
            if (s.values.size() != x.size() || s.trials.size() != x.size() || s.ci95.size() != x.size())
                throw std::invalid_argument("Series '" + s.name + "' length differs from the x grid.");
    }

    std::string format_csv(const CurveResult &result)
    {
        result.validate();
        std::ostringstream out;
        for (const auto &c : result.comments)
            out << "# " << c << '\n';
        out << result.x_name;
        for (const auto &s : result.series)
            out << ',' << s.name << ',' << s.name << "_trials," << s.name << "_ci95";
        out << '\n';
        for (std::size_t i = 0; i < result.x.size(); ++i)
        {
            out << fmt(result.x[i]);
            for (const auto &s : result.series)
                out << ',' << fmt(s.values[i]) << ',' << s.trials[i] << ',' << fmt(s.ci95[i]);
            out << '\n';
        }
        return out.str();
    }

    void export_csv(const CurveResult &result, const std::string &path)
    {
        const std::string text = format_csv(result);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("cannot open '" + path + "' for writing");
        f << text;
        f.flush();
        if (!f)
            throw IoError("failed writing '" + path + "'");
    }

    CurveResult parse_csv(const std::string &text)
    {
        CurveResult out;
        std::istringstream in(text);
        std::string line;
        bool header = false;
        int line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.rfind("# ", 0) == 0)
            {
                if (header)
                    throw std::invalid_argument("comment after header at line " + std::to_string(line_no));
                out.comments.push_back(line.substr(2));
                continue;
            }
            if (line.empty())
                continue;
            const auto cells = split(line);
            if (!header)
            {
                if ((cells.size() - 1) % 3 != 0)
                    throw std::invalid_argument("malformed CSV header");
                out.x_name = cells[0];
                for (std::size_t c = 1; c < cells.size(); c += 3)
                {
                    if (cells[c + 1] != cells[c] + "_trials" || !ends_with(cells[c + 2], "_ci95"))
                        throw std::invalid_argument("malformed CSV header near '" + cells[c] + "'");
                    out.series.push_back(Series{cells[c], {}, {}, {}});
                }
                header = true;
                continue;
            }
            if (cells.size() != 1 + 3 * out.series.size())
                throw std::invalid_argument("wrong cell count at line " + std::to_string(line_no));
            out.x.push_back(parse_double(cells[0]));
            for (std::size_t s = 0; s < out.series.size(); ++s)
                out.series[s].push(parse_double(cells[1 + 3 * s]), std::stoull(cells[2 + 3 * s]), parse_double(cells[3 + 3 * s]));
        }
        if (!header)
            throw std::invalid_argument("CSV has no header row");
        return out;
    }

    CurveResult read_csv(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw IoError("cannot open '" + path + "' for reading");
        std::stringstream buf;
        buf << f.rdbuf();
        return parse_csv(buf.str());
    }
}
