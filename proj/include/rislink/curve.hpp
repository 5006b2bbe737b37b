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

#ifndef RISLINK_CURVE_HPP
#define RISLINK_CURVE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rislink
{
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct Series
    {
        std::string name;
        std::vector<double> values;
        std::vector<std::uint64_t> trials;
        std::vector<double> ci95;

        void push(double value, std::uint64_t n, double half_width)
        {
            values.push_back(value);
            trials.push_back(n);
            ci95.push_back(half_width);
        }
    };

    /// One sweep: an x grid and any number of series sampled on it.
    struct CurveResult
    {
        std::string x_name;
        std::vector<double> x;
        std::vector<Series> series;
        std::vector<std::string> comments; // written as leading '# ' lines

        const Series &find(const std::string &name) const;
        void validate() const;
    };

    // Floats use %.8e (nine significant digits); trial counts are integers.
    std::string format_csv(const CurveResult &result);
    void export_csv(const CurveResult &result, const std::string &path);

    CurveResult parse_csv(const std::string &text);
    CurveResult read_csv(const std::string &path);
}

#endif
