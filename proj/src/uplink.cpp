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

#include "rislink/uplink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rislink
{
    UplinkChannelSet UplinkChannelSet::from_parts(const RicianParts &bs_ris, const ReflectionPattern &omega, const RicianParts &ris_user)
    {
        if (bs_ris.los.rows() != omega.size() || ris_user.los.cols() != omega.size())
            throw std::invalid_argument("Uplink cascade dimensions do not conform.");

        const CVector w = omega.diagonal();
        auto product = [&](const CMatrix &q, const CMatrix &g) -> CMatrix
        { return q.transpose() * w.asDiagonal() * g.transpose(); };

        const double ql = bs_ris.los_weight(), qn = bs_ris.nlos_weight();
        const double gl = ris_user.los_weight(), gn = ris_user.nlos_weight();

        UplinkChannelSet out;
        out.a = ql * gl * product(bs_ris.los, ris_user.los);
        out.b = CMatrix::Zero(out.a.rows(), out.a.cols());
        out.o = CMatrix::Zero(out.a.rows(), out.a.cols());
        if (gn != 0.0)
            out.b += ql * gn * product(bs_ris.los, ris_user.nlos);
        if (qn != 0.0)
            out.b += qn * gl * product(bs_ris.nlos, ris_user.los);
        if (qn != 0.0 && gn != 0.0)
            out.o = qn * gn * product(bs_ris.nlos, ris_user.nlos);
        out.c = out.a + out.b + out.o;
        return out;
    }

    UplinkChannelSet UplinkChannelSet::from_realization(const ChannelRealization &real, double t)
    {
        return from_parts(real.bs_ris_parts(), real.reflection(), real.ris_user_parts(t));
    }

    UplinkChannelSet UplinkChannelSet::from_matrix(const CMatrix &c)
    {
        UplinkChannelSet out;
        out.c = c;
        out.a = c;
        out.b = CMatrix::Zero(c.rows(), c.cols());
        out.o = CMatrix::Zero(c.rows(), c.cols());
        return out;
    }

    double uplink_observe(const CRow &c_row, const RVector &s, const RVector &s_bar, cplx v1, cplx v2)
    {
        if (s.size() != c_row.size() || s_bar.size() != c_row.size())
            throw std::invalid_argument("Uplink symbol length must match the channel row.");
        const cplx y1 = (c_row * s.cast<cplx>()).value() + v1;
        const cplx y2 = (c_row * s_bar.cast<cplx>()).value() + v2;
        return std::norm(y1) - std::norm(y2);
    }

    double uplink_observe(const CRow &c_row, const ComplementarySymbol &sym, cplx v1, cplx v2)
    {
        if (sym.levels() != 2)
            throw std::invalid_argument("Uplink linear model is defined for A = 2.");
        return uplink_observe(c_row, sym.amplitudes(), sym.complement(), v1, v2);
    }

    double average_xi(const RVector &z_tilde)
    {
        if (z_tilde.size() == 0)
            throw std::invalid_argument("Need at least one antenna.");
        return z_tilde.mean();
    }

    RVector rho_part(const CMatrix &x, const CMatrix &y)
    {
        const CVector lambda = x.rowwise().sum().conjugate();
        return (lambda.asDiagonal() * y).real().colwise().sum().transpose() / static_cast<double>(x.rows());
    }

    RhoCoefficients rho_exact(const UplinkChannelSet &chans)
    {
        const CMatrix &a = chans.a, &b = chans.b, &o = chans.o;
        RhoCoefficients out;
        out.xi1 = rho_part(a, a);
        out.xi2 = rho_part(b, b);
        out.xi3 = rho_part(o, o);
        out.xi4 = rho_part(a, b) + rho_part(a, o) + rho_part(b, a) + rho_part(b, o) + rho_part(o, a) + rho_part(o, b);
        out.rho = out.xi1 + out.xi2 + out.xi3 + out.xi4;
        return out;
    }

    double rho_pilot_estimate(const UplinkChannelSet &chans, Eigen::Index user, double sigma2, RngStream *rng, int repetitions)
    {
        if (user < 0 || user >= chans.users())
            throw std::invalid_argument("Pilot user index out of range.");
        if (repetitions < 1)
            throw std::invalid_argument("Pilot repetitions must be at least 1.");
        if (sigma2 < 0.0)
            throw std::invalid_argument("Noise variance must be non-negative.");
        if (sigma2 > 0.0 && rng == nullptr)
            throw std::invalid_argument("Noisy pilot estimation needs a random stream.");

        RVector s = RVector::Constant(chans.users(), 0.5);
        s[user] = 1.0;
        const RVector s_bar = RVector::Ones(chans.users()) - s;

        double acc = 0.0;
        for (int rep = 0; rep < repetitions; ++rep)
        {
            RVector z(chans.antennas());
            for (Eigen::Index m = 0; m < chans.antennas(); ++m)
            {
                cplx v1 = 0.0, v2 = 0.0;
                if (sigma2 > 0.0)
                {
                    v1 = rng->complex_normal(sigma2);
                    v2 = rng->complex_normal(sigma2);
                }
                z[m] = uplink_observe(chans.c.row(m), s, s_bar, v1, v2);
            }
            acc += average_xi(z);
        }
        return acc / repetitions;
    }

    DecisionRegions build_regions(const RVector &rho, const BinaryConstellation &constellation, double rel_tol)
    {
        if (rho.size() != constellation.dims())
            throw std::invalid_argument("Coefficient count must match the constellation dimension.");

        const std::uint64_t count = constellation.size();
        std::vector<double> mean(count);
        double scale = 0.0;
        for (std::uint64_t i = 0; i < count; ++i)
        {
            mean[i] = rho.dot(constellation.x_bar(i));
            scale = std::max(scale, std::abs(mean[i]));
        }

        std::vector<std::uint64_t> order(count);
        std::iota(order.begin(), order.end(), std::uint64_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return mean[l] < mean[r]; });

        const double tol = rel_tol * (1.0 + scale);
        DecisionRegions out;
        out.region_of.assign(count, 0);
        for (std::uint64_t idx : order)
        {
            if (out.means.empty() || mean[idx] - out.means.back() > tol)
            {
                out.means.push_back(mean[idx]);
                out.points.emplace_back();
            }
            out.points.back().push_back(idx);
            out.region_of[idx] = static_cast<int>(out.means.size() - 1);
        }
        for (auto &p : out.points)
            std::sort(p.begin(), p.end());
        for (std::size_t r = 0; r + 1 < out.means.size(); ++r)
            out.boundaries.push_back(0.5 * (out.means[r] + out.means[r + 1]));
        return out;
    }

    DecisionRegions build_regions(const RhoCoefficients &rho, const BinaryConstellation &constellation, double rel_tol)
    {
        return build_regions(rho.rho, constellation, rel_tol);
    }

    std::size_t region_detect(double xi, const DecisionRegions &regions)
    {
        const auto it = std::upper_bound(regions.boundaries.begin(), regions.boundaries.end(), xi);
        return static_cast<std::size_t>(it - regions.boundaries.begin());
    }

    std::size_t ml_detect(double xi, const std::vector<GaussianSerModel> &models)
    {
        if (models.empty())
            throw std::invalid_argument("ML detection needs at least one candidate.");
        std::size_t best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < models.size(); ++i)
        {
            if (!(models[i].sigma2 > 0.0))
                throw std::invalid_argument("Candidate variance must be positive.");
            const double d = xi - models[i].mu;
            const double cost = std::log(models[i].sigma2) + d * d / models[i].sigma2;
            if (cost < best_cost)
            {
                best_cost = cost;
                best = i;
            }
        }
        return best;
    }
}
