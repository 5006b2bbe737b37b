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

#ifndef RISLINK_STATS_HPP
#define RISLINK_STATS_HPP

#include <functional>
#include <vector>

namespace rislink
{
    /// CDF of a density tabulated by the trapezoid rule on a uniform grid over [lo, hi].
    class TabulatedCdf
    {
    public:
        TabulatedCdf(const std::function<double(double)> &pdf, double lo, double hi, std::size_t intervals);

        double operator()(double x) const;
        double total() const { return cum_.back(); }

    private:
        double lo_;
        double step_;
        std::vector<double> cum_;
    };

    // sup |F_n - F| for samples sorted ascending.
    double ks_distance(const std::vector<double> &sorted, const std::function<double(double)> &cdf);

    struct ChiSquareResult
    {
        double statistic = 0.0;
        int dof = 0;
        double p_value = 0.0;
    };

    /// Pearson test of sorted samples against a CDF on the given interior edges. The two
    /// tails are extra bins; adjacent bins are merged until each expects at least min_expected.
    ChiSquareResult chi_square_gof(const std::vector<double> &sorted, const std::vector<double> &edges,
                                   const std::function<double(double)> &cdf, double min_expected = 5.0);

    // n + 1 evenly spaced points over [lo, hi].
    std::vector<double> linspace(double lo, double hi, std::size_t n);

    // Trapezoid rule over sample points.
    double trapezoid(const std::vector<double> &x, const std::vector<double> &y);
}

#endif
