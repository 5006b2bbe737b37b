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

#include "rislink/stats.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rislink
{
    TabulatedCdf::TabulatedCdf(const std::function<double(double)> &pdf, double lo, double hi, std::size_t intervals)
        : lo_(lo), step_((hi - lo) / static_cast<double>(intervals))
    {
        if (!(hi > lo) || intervals < 1)
            throw std::invalid_argument("CDF table needs hi > lo and at least one interval.");
        cum_.resize(intervals + 1);
        cum_[0] = 0.0;
        double prev = pdf(lo);
        for (std::size_t i = 1; i <= intervals; ++i)
        {
            const double cur = pdf(lo + step_ * static_cast<double>(i));
            cum_[i] = cum_[i - 1] + 0.5 * step_ * (prev + cur);
            prev = cur;
        }
    }

    double TabulatedCdf::operator()(double x) const
    {
        const double u = (x - lo_) / step_;
        if (u <= 0.0)
            return 0.0;
        const auto last = static_cast<double>(cum_.size() - 1);
        if (u >= last)
            return cum_.back();
        const auto i = static_cast<std::size_t>(u);
        const double f = u - static_cast<double>(i);
        return cum_[i] + f * (cum_[i + 1] - cum_[i]);
    }

    double ks_distance(const std::vector<double> &sorted, const std::function<double(double)> &cdf)
    {
        if (sorted.empty())
            throw std::invalid_argument("KS distance needs at least one sample.");
        const double n = static_cast<double>(sorted.size());
        double d = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            const double f = cdf(sorted[i]);
            d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
        }
        return d;
    }

    ChiSquareResult chi_square_gof(const std::vector<double> &sorted, const std::vector<double> &edges,
                                   const std::function<double(double)> &cdf, double min_expected)
    {
        if (edges.empty() || !std::is_sorted(edges.begin(), edges.end()))
            throw std::invalid_argument("Bin edges must be non-empty and ascending.");
        const double n = static_cast<double>(sorted.size());

        std::vector<double> observed, expected;
        double prev_cdf = 0.0;
        auto prev_it = sorted.begin();
        for (double e : edges)
        {
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), e);
            const double c = cdf(e);
            observed.push_back(static_cast<double>(it - prev_it));
            expected.push_back(n * (c - prev_cdf));
            prev_it = it;
            prev_cdf = c;
        }
        observed.push_back(static_cast<double>(sorted.end() - prev_it));
        expected.push_back(n * (1.0 - prev_cdf));

        std::vector<double> obs_m, exp_m;
        double o_acc = 0.0, e_acc = 0.0;
        for (std::size_t i = 0; i < observed.size(); ++i)
        {
            o_acc += observed[i];
            e_acc += expected[i];
            if (e_acc >= min_expected)
            {
                obs_m.push_back(o_acc);
                exp_m.push_back(e_acc);
                o_acc = e_acc = 0.0;
            }
        }
        if (e_acc > 0.0 || o_acc > 0.0)
        {
            if (exp_m.empty())
                throw std::invalid_argument("Too few samples for a chi-square test.");
            obs_m.back() += o_acc;
            exp_m.back() += e_acc;
        }
        if (exp_m.size() < 2)
            throw std::invalid_argument("Chi-square test needs at least two populated bins.");

        ChiSquareResult out;
        for (std::size_t i = 0; i < obs_m.size(); ++i)
        {
            const double d = obs_m[i] - exp_m[i];
            out.statistic += d * d / exp_m[i];
        }
        out.dof = static_cast<int>(obs_m.size()) - 1;
        out.p_value = gsl_cdf_chisq_Q(out.statistic, out.dof);
        return out;
    }

    std::vector<double> linspace(double lo, double hi, std::size_t n)
    {
        std::vector<double> out(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        return out;
    }

    double trapezoid(const std::vector<double> &x, const std::vector<double> &y)
    {
        if (x.size() != y.size())
            throw std::invalid_argument("Trapezoid inputs differ in length.");
        double acc = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i)
            acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
        return acc;
    }
}
