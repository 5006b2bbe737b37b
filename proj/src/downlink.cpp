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

#include "rislink/downlink.hpp"

#include <limits>

namespace rislink
{
    EquivalentLinearChannel build_equiv_channel(const CMatrix &h)
    {
        if (!h.allFinite())
            throw std::invalid_argument("Channel matrix must be finite.");
        EquivalentLinearChannel out{RMatrix(h.rows(), h.cols())};
        for (Eigen::Index m = 0; m < h.rows(); ++m)
        {
            const cplx lambda = std::conj(h.row(m).sum());
            out.h_bar.row(m) = (lambda * h.row(m)).real();
        }
        return out;
    }

    RMatrix hadamard(int order)
    {
        if (order < 1 || (order & (order - 1)) != 0)
            throw std::invalid_argument("Hadamard order must be a power of two.");
        RMatrix h = RMatrix::Ones(1, 1);
        while (h.rows() < order)
        {
            const auto n = h.rows();
            RMatrix next(2 * n, 2 * n);
            next << h, h, h, -h;
            h = std::move(next);
        }
        return h;
    }

    int pilot_length_for(int n_t, int requested)
    {
        int len = 1;
        while (len < std::max(n_t, requested))
            len *= 2;
        return len;
    }

    RMatrix hadamard_pilots(int n_t, int length)
    {
        if (n_t < 1 || length < n_t)
            throw std::invalid_argument("Pilot length must be at least the number of antennas.");
        return hadamard(length).topRows(n_t);
    }

    EquivalentLinearChannel ls_estimate(const PilotBlock &pilots)
    {
        const RMatrix &x = pilots.x_bar_t;
        if (pilots.z_t.cols() != x.cols())
            throw std::invalid_argument("Pilot observations and pilot symbols differ in length.");
        if (x.cols() < x.rows())
            throw RankDeficientError("Pilot Gram matrix is singular: pilot length shorter than antenna count.");

        const RMatrix gram = x * x.transpose();
        Eigen::LDLT<RMatrix> ldlt(gram);
        const RVector d = ldlt.vectorD().cwiseAbs();
        if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-12 * d.maxCoeff())
            throw RankDeficientError("Pilot Gram matrix is singular.");

        // h_hat = z x^T (x x^T)^-1, solved as (x x^T) h_hat^T = x z^T
        const RMatrix rhs = x * pilots.z_t.transpose();
        return {ldlt.solve(rhs).transpose()};
    }

    BinaryConstellation::BinaryConstellation(int dims) : dims_(dims)
    {
        if (dims < 1)
            throw std::invalid_argument("Constellation needs at least one dimension.");
        if (dims > 16)
            throw SearchTooLargeError("Exhaustive search is capped at 2^16 candidates.");
    }

    RVector BinaryConstellation::x_bar(std::uint64_t index) const
    {
        RVector x(dims_);
        for (int k = 0; k < dims_; ++k)
            x[k] = ((index >> (dims_ - 1 - k)) & 1u) ? 1.0 : -1.0;
        return x;
    }

    std::uint64_t joint_detect_index(const RVector &z, const EquivalentLinearChannel &chan, const BinaryConstellation &constellation)
    {
        if (z.size() != chan.users() || chan.antennas() != constellation.dims())
            throw std::invalid_argument("Joint detection dimensions do not conform.");

        std::uint64_t best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::uint64_t i = 0; i < constellation.size(); ++i)
        {
            const double cost = (z - chan.h_bar * constellation.x_bar(i)).squaredNorm();
            if (cost < best_cost)
            {
                best_cost = cost;
                best = i;
            }
        }
        return best;
    }

    ComplementarySymbol joint_detect(const RVector &z, const EquivalentLinearChannel &chan, const BinaryConstellation &constellation)
    {
        return constellation.symbol(joint_detect_index(z, chan, constellation));
    }

    JointDetector::JointDetector(const EquivalentLinearChannel &chan, const BinaryConstellation &constellation)
    {
        if (chan.antennas() != constellation.dims())
            throw std::invalid_argument("Joint detection dimensions do not conform.");
        images_.resize(chan.users(), static_cast<Eigen::Index>(constellation.size()));
        for (std::uint64_t i = 0; i < constellation.size(); ++i)
            images_.col(static_cast<Eigen::Index>(i)) = chan.h_bar * constellation.x_bar(i);
    }

    std::uint64_t JointDetector::detect(const RVector &z) const
    {
        if (z.size() != images_.rows())
            throw std::invalid_argument("Observation length must match the user count.");
        Eigen::Index best = 0;
        (images_.colwise() - z).colwise().squaredNorm().minCoeff(&best);
        return static_cast<std::uint64_t>(best);
    }

    Precoder zf_precoder(const EquivalentLinearChannel &chan, double power_budget)
    {
        const RMatrix &h = chan.h_bar;
        if (h.rows() > h.cols())
            throw std::invalid_argument("ZF precoding needs at least as many antennas as users.");
        if (!(power_budget > 0.0))
            throw std::invalid_argument("Power budget must be positive.");

        Eigen::JacobiSVD<RMatrix> svd(h);
        const RVector &sv = svd.singularValues();
        if (sv.size() == 0 || sv.minCoeff() < zf_rank_tolerance * sv.maxCoeff() || sv.maxCoeff() == 0.0)
            throw RankDeficientError("Equivalent channel is rank deficient; ZF precoding is undefined.");

        const RMatrix gram = h * h.transpose();
        const Eigen::LLT<RMatrix> llt(gram);
        const RMatrix gram_inv = llt.solve(RMatrix::Identity(h.rows(), h.rows()));

        Precoder out;
        out.p = h.transpose() * gram_inv;
        out.trace_inv_corr = gram_inv.trace();
        out.power_budget = power_budget;
        out.rho = power_budget / (2.0 * out.trace_inv_corr);
        return out;
    }

    RVector precoded_roundtrip(const EquivalentLinearChannel &chan, const Precoder &precoder, const ComplementarySymbol &sym)
    {
        if (sym.levels() != 2)
            throw std::invalid_argument("Precoded detection is defined for A = 2.");
        const RMatrix b = chan.h_bar * precoder.p;
        const RVector x = sym.x_bar();
        const RVector ones = RVector::Ones(x.size());
        const RVector hi = b * (0.5 * (ones + x));
        const RVector lo = b * (0.5 * (ones - x));
        return hi.array().square() - lo.array().square();
    }

    double output_snr_exact(const EquivalentLinearChannel &chan, double sigma2)
    {
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("Noise variance must be positive.");
        const Precoder p = zf_precoder(chan, 1.0);
        return p.rho / (2.0 * sigma2 + 0.75 * sigma2 * sigma2);
    }

    double output_snr_asymptotic(int n_t, int n_k, double sigma2)
    {
        if (n_k < 1 || n_t <= n_k + 1)
            throw std::invalid_argument("Asymptotic output SNR needs N_t > N_k + 1.");
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("Noise variance must be positive.");
        return static_cast<double>(n_t - n_k - 1) / (4.0 * n_k * sigma2);
    }
}
