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

#ifndef RISLINK_UPLINK_HPP
#define RISLINK_UPLINK_HPP

#include "rislink/channel.hpp"
#include "rislink/common.hpp"
#include "rislink/downlink.hpp"
#include "rislink/rng.hpp"
#include "rislink/waveform.hpp"

#include <cstdint>
#include <vector>

namespace rislink
{
    /// Uplink cascade C = Q^T Omega G^T (N_t x N_k) and its split C = a + b + o into
    /// LoS-LoS, mixed, and NLoS-NLoS products.
    struct UplinkChannelSet
    {
        CMatrix c;
        CMatrix a;
        CMatrix b;
        CMatrix o;

        Eigen::Index antennas() const { return c.rows(); }
        Eigen::Index users() const { return c.cols(); }

        // bs_ris: N x N_t, ris_user: N_k x N (downlink orientation).
        static UplinkChannelSet from_parts(const RicianParts &bs_ris, const ReflectionPattern &omega, const RicianParts &ris_user);
        static UplinkChannelSet from_realization(const ChannelRealization &real, double t = 0.0);
        // No decomposition available: a = c, b = o = 0.
        static UplinkChannelSet from_matrix(const CMatrix &c);
    };

    // |c s + v1|^2 - |c s_bar + v2|^2 for one BS antenna.
    double uplink_observe(const CRow &c_row, const ComplementarySymbol &sym, cplx v1 = 0.0, cplx v2 = 0.0);

    // Raw amplitude version used by pilots (amplitudes need not lie in the alphabet).
    double uplink_observe(const CRow &c_row, const RVector &s, const RVector &s_bar, cplx v1 = 0.0, cplx v2 = 0.0);

    double average_xi(const RVector &z_tilde);

    struct RhoCoefficients
    {
        RVector rho;
        RVector xi1; // LoS-LoS
        RVector xi2; // mixed-mixed
        RVector xi3; // NLoS-NLoS
        RVector xi4; // all cross products between groups

        Eigen::Index size() const { return rho.size(); }
    };

    // part_n = (1/N_t) sum_m Re(conj(sum_j x_mj) y_mn)
    RVector rho_part(const CMatrix &x, const CMatrix &y);

    RhoCoefficients rho_exact(const UplinkChannelSet &chans);

    /// xi observed under the pilot s_n = 1, s_m = 1/2 (m != n), averaged over repetitions.
    /// With sigma2 = 0 the result is rho_n; rng may then be null.
    double rho_pilot_estimate(const UplinkChannelSet &chans, Eigen::Index user, double sigma2, RngStream *rng, int repetitions = 1);

    struct DecisionRegions
    {
        std::vector<double> boundaries;                 // strictly increasing, size R - 1
        std::vector<double> means;                      // sorted distinct noiseless means, size R
        std::vector<std::vector<std::uint64_t>> points; // constellation indices per region, ascending
        std::vector<int> region_of;                     // constellation index -> region

        std::size_t regions() const { return means.size(); }
        std::uint64_t representative(std::size_t region) const { return points[region].front(); }
        bool indistinguishable() const { return regions() < region_of.size(); }
    };

    // Equal means within rel_tol * (1 + max |mean|) share a region.
    DecisionRegions build_regions(const RVector &rho, const BinaryConstellation &constellation, double rel_tol = 1e-12);
    DecisionRegions build_regions(const RhoCoefficients &rho, const BinaryConstellation &constellation, double rel_tol = 1e-12);

    // Region r with d_{r-1} <= xi < d_r.
    std::size_t region_detect(double xi, const DecisionRegions &regions);

    // argmin ln(sigma2) + (xi - mu)^2 / sigma2, ties to the lowest index.
    std::size_t ml_detect(double xi, const std::vector<GaussianSerModel> &models);
}

#endif
