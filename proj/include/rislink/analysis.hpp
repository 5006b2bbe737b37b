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

#ifndef RISLINK_ANALYSIS_HPP
#define RISLINK_ANALYSIS_HPP

#include "rislink/common.hpp"
#include "rislink/downlink.hpp"
#include "rislink/uplink.hpp"
#include "rislink/waveform.hpp"

#include <vector>

namespace rislink
{
    /// Squared envelope of a complex Gaussian with mean power gamma and noise power beta.
    struct GammaParams
    {
        double alpha = 1.0;
        double beta = 1.0;  // 2 sigma_v^2
        double gamma = 0.0; // |c s|^2

        void validate() const;
    };

    double gamma_pdf(double x, const GammaParams &p);

    // Rice density of |r_bar + n| with per-component noise variance sigma_v2.
    double rician_envelope_pdf(double t, double r_bar, double sigma_v2);

    struct SeriesControl
    {
        int max_terms = 200;   // diagonals k + m
        double tail_tol = 1e-12;

        void validate() const;
    };

    /// Density of G(1, beta, gamma) - G(1, beta, gamma'), summed diagonal by diagonal.
    /// Throws TruncationError when the tail bound stays above tail_tol.
    double diff_gamma_pdf(double x, const GammaParams &p, const GammaParams &p_prime, const SeriesControl &ctl = {});

    /// Same density, precomputed for fast repeated evaluation.
    ///
    /// The double series is regrouped by the power of |x|, so evaluation costs one Poisson-weighted
    /// sum per point. Poisson sums are cut where the neglected mass is below 1e-16.
    class DiffGammaDensity
    {
    public:
        DiffGammaDensity(const GammaParams &p, const GammaParams &p_prime);

        double operator()(double x) const;
        double mean() const { return gamma_ - gamma_prime_; }

    private:
        static std::vector<double> coefficients(const std::vector<double> &near, const std::vector<double> &far);

        double beta_;
        double gamma_;
        double gamma_prime_;
        std::vector<double> pos_; // V_j for x >= 0
        std::vector<double> neg_; // V_j for x < 0
    };

    // mu = |c s|^2 - |c s_bar|^2, sigma2 = 4 sigma_v^2 (|c s|^2 + |c s_bar|^2) + 8 sigma_v^4
    GaussianSerModel gaussian_approx(const CRow &c_row, const ComplementarySymbol &sym, double sigma_v2);
    GaussianSerModel gaussian_approx(double power_s, double power_s_bar, double sigma_v2);

    // mu_xi = sum mu / N_t, sigma_xi^2 = sum sigma^2 / N_t^2
    GaussianSerModel xi_gaussian(const std::vector<GaussianSerModel> &per_antenna, Eigen::Index n_t);

    double normal_pdf(double x, double mu, double sigma2);
    double normal_cdf(double x, double mu, double sigma2);

    // Gaussian mass of the decision interval of `region`.
    double symbol_prob(std::size_t region, const DecisionRegions &regions, const GaussianSerModel &model);

    struct SerResult
    {
        double ser = 0.0;
        bool degenerate = false; // some constellation points share a decision region
    };

    /// Average SER over all 2^N_k points. Points that share a region with a lower-index point
    /// are never decided and count as errors.
    SerResult closed_form_ser(const RhoCoefficients &rho, const NoiseModel &noise, const UplinkChannelSet &chans, const BinaryConstellation &constellation);

    // Per-point (mu_xi, sigma_xi^2) conditioned on the transmitted index.
    GaussianSerModel xi_model(const UplinkChannelSet &chans, const ComplementarySymbol &sym, double sigma_v2);
}

#endif
