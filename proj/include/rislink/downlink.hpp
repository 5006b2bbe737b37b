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

#ifndef RISLINK_DOWNLINK_HPP
#define RISLINK_DOWNLINK_HPP

#include "rislink/common.hpp"
#include "rislink/waveform.hpp"

#include <cstdint>

namespace rislink
{
    /// Real matrix relating bipolar symbols x_bar = 2 s - 1 to z = |y1|^2 - |y2|^2.
    /// Row m is Re(Lambda_mm h_m) with Lambda_mm = conj(sum_n h_mn).
    struct EquivalentLinearChannel
    {
        RMatrix h_bar; // N_k x N_t

        Eigen::Index users() const { return h_bar.rows(); }
        Eigen::Index antennas() const { return h_bar.cols(); }
    };

    EquivalentLinearChannel build_equiv_channel(const CMatrix &h);

    struct PilotBlock
    {
        RMatrix x_bar_t; // N_t x L, bipolar
        RMatrix z_t;     // N_k x L
    };

    // Sylvester construction; order must be a power of two.
    RMatrix hadamard(int order);

    // Smallest power of two that is >= max(requested, n_t).
    int pilot_length_for(int n_t, int requested);

    // First n_t rows of the Hadamard matrix of the given length.
    RMatrix hadamard_pilots(int n_t, int length);

    EquivalentLinearChannel ls_estimate(const PilotBlock &pilots);

    /// All 2^n binary amplitude vectors in lexicographic order.
    class BinaryConstellation
    {
    public:
        static constexpr std::uint64_t max_points = std::uint64_t{1} << 16;

        explicit BinaryConstellation(int dims);

        int dims() const { return dims_; }
        std::uint64_t size() const { return std::uint64_t{1} << dims_; }
        ComplementarySymbol symbol(std::uint64_t index) const { return ComplementarySymbol::from_index(index, dims_); }
        RVector x_bar(std::uint64_t index) const;

    private:
        int dims_;
    };

    /// argmin_s sum_m (z_m - h_bar_m x_bar)^2, ties to the lowest index.
    std::uint64_t joint_detect_index(const RVector &z, const EquivalentLinearChannel &chan, const BinaryConstellation &constellation);
    ComplementarySymbol joint_detect(const RVector &z, const EquivalentLinearChannel &chan, const BinaryConstellation &constellation);

    /// joint_detect_index with the noiseless images h_bar * x_bar precomputed.
    class JointDetector
    {
    public:
        JointDetector(const EquivalentLinearChannel &chan, const BinaryConstellation &constellation);

        std::uint64_t detect(const RVector &z) const;

    private:
        RMatrix images_; // N_k x 2^N_t
    };

    struct Precoder
    {
        RMatrix p;                 // N_t x N_k
        double rho = 0.0;          // power_budget / (2 tr(R^-1))
        double power_budget = 1.0;
        double trace_inv_corr = 0.0; // tr((H_bar H_bar^T)^-1)
    };

    // Smallest-to-largest singular value ratio below which ZF refuses to invert.
    inline constexpr double zf_rank_tolerance = 1e-10;

    Precoder zf_precoder(const EquivalentLinearChannel &chan, double power_budget = 1.0);

    // |H_bar P s|^2 - |H_bar P s_bar|^2 elementwise, A = 2.
    RVector precoded_roundtrip(const EquivalentLinearChannel &chan, const Precoder &precoder, const ComplementarySymbol &sym);

    enum class SnrMode
    {
        exact,
        asymptotic
    };

    // rho / (2 sigma^2 + 3 sigma^4 / 4) with rho for unit transmit power.
    double output_snr_exact(const EquivalentLinearChannel &chan, double sigma2);

    // (N_t - N_k - 1) / (4 N_k sigma^2), valid at high SNR.
    double output_snr_asymptotic(int n_t, int n_k, double sigma2);
}

#endif
