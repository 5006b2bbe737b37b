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

#include "rislink/analysis.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <limits>

namespace rislink
{
    namespace
    {
        constexpr double neg_inf = -std::numeric_limits<double>::infinity();

        double log_poisson(int k, double lambda)
        {
            if (lambda == 0.0)
                return k == 0 ? 0.0 : neg_inf;
            return k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
        }

        double poisson(int k, double lambda) { return std::exp(log_poisson(k, lambda)); }

        // Index past which the Poisson(lambda) mass is negligible.
        int poisson_cut(double lambda)
        {
            return static_cast<int>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 40.0));
        }

        // Positive branch: sum over diagonals d = k + m of P_k P'_m f_{k,m}(x).
        double diff_gamma_branch(double u, double beta, double lam, double lam_prime, const SeriesControl &ctl)
        {
            const double lam_total = lam + lam_prime;
            std::vector<double> pu; // Poisson(j; u) for j <= d
            double sum = 0.0;
            double bound = std::numeric_limits<double>::infinity();
            for (int d = 0; d < ctl.max_terms; ++d)
            {
                pu.push_back(poisson(d, u));
                double diag = 0.0;
                for (int k = 0; k <= d; ++k)
                {
                    const int m = d - k;
                    const double w = std::exp(log_poisson(k, lam) + log_poisson(m, lam_prime));
                    if (w == 0.0)
                        continue;
                    double c = std::exp(-(1.0 + m) * std::numbers::ln2); // C(m, 0) 2^{-(1+m)}
                    double inner = c * pu[k];
                    for (int n = 1; n <= k; ++n)
                    {
                        c *= (m + n) / (2.0 * n);
                        inner += c * pu[k - n];
                    }
                    diag += w * inner;
                }
                sum += diag / beta;

                if (lam_total == 0.0)
                    return sum;
                if (d + 2 > lam_total)
                {
                    bound = poisson(d + 1, lam_total) / (1.0 - lam_total / (d + 2)) / beta;
                    if (bound < ctl.tail_tol)
                        return sum;
                }
            }
            throw TruncationError("Difference-of-gamma series did not converge within max_terms.", sum, bound);
        }

        // 1 - P and P for the interval [lo, hi) under N(mu, sigma^2).
        struct IntervalMass
        {
            double inside;
            double outside;
        };

        IntervalMass interval_mass(double lo, double hi, double mu, double sigma)
        {
            const double a = (hi - mu) / (std::sqrt(2.0) * sigma);
            const double b = (lo - mu) / (std::sqrt(2.0) * sigma);
            if (b >= 0.0)
            {
                const double in = 0.5 * (std::erfc(b) - std::erfc(a));
                return {in, 1.0 - in};
            }
            if (a <= 0.0)
            {
                const double in = 0.5 * (std::erfc(-a) - std::erfc(-b));
                return {in, 1.0 - in};
            }
            const double out = 0.5 * std::erfc(a) + 0.5 * std::erfc(-b);
            return {1.0 - out, out};
        }

        std::pair<double, double> region_limits(std::size_t region, const DecisionRegions &regions)
        {
            if (region >= regions.regions())
                throw std::invalid_argument("Region index out of range.");
            const double inf = std::numeric_limits<double>::infinity();
            const double lo = region == 0 ? -inf : regions.boundaries[region - 1];
            const double hi = region + 1 == regions.regions() ? inf : regions.boundaries[region];
            return {lo, hi};
        }
    }

    void GammaParams::validate() const
    {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("Gamma scale beta must be positive.");
        if (!(gamma >= 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("Gamma noncentrality must be non-negative.");
        if (!(alpha >= 1.0) || !std::isfinite(alpha))
            throw std::invalid_argument("Gamma shape alpha must be at least 1.");
    }

    double gamma_pdf(double x, const GammaParams &p)
    {
        p.validate();
        if (x < 0.0)
            return 0.0;
        const double nu = p.alpha - 1.0;
        if (p.gamma == 0.0)
        {
            // central limit of the Bessel form: a gamma(alpha, beta) density
            if (x == 0.0)
                return nu == 0.0 ? 1.0 / p.beta : 0.0;
            return std::exp(nu * std::log(x) - x / p.beta - p.alpha * std::log(p.beta) - std::lgamma(p.alpha));
        }
        if (x == 0.0)
            return nu == 0.0 ? std::exp(-p.gamma / p.beta) / p.beta : 0.0;

        const double z = 2.0 * std::sqrt(p.gamma * x) / p.beta;
        const double scaled = nu == 0.0 ? gsl_sf_bessel_I0_scaled(z) : gsl_sf_bessel_Inu_scaled(nu, z);
        const double root_diff = std::sqrt(x) - std::sqrt(p.gamma);
        const double power = nu == 0.0 ? 1.0 : std::pow(x / p.gamma, 0.5 * nu);
        return power * scaled * std::exp(-root_diff * root_diff / p.beta) / p.beta;
    }

    double rician_envelope_pdf(double t, double r_bar, double sigma_v2)
    {
        if (!(sigma_v2 > 0.0))
            throw std::invalid_argument("Noise variance must be positive.");
        if (r_bar < 0.0)
            throw std::invalid_argument("Rician amplitude must be non-negative.");
        if (t < 0.0)
            return 0.0;
        const double z = r_bar * t / sigma_v2;
        const double d = t - r_bar;
        return t / sigma_v2 * gsl_sf_bessel_I0_scaled(z) * std::exp(-d * d / (2.0 * sigma_v2));
    }

    void SeriesControl::validate() const
    {
        if (max_terms < 1)
            throw std::invalid_argument("max_terms must be at least 1.");
        if (!(tail_tol > 0.0))
            throw std::invalid_argument("tail_tol must be positive.");
    }

    double diff_gamma_pdf(double x, const GammaParams &p, const GammaParams &p_prime, const SeriesControl &ctl)
    {
        p.validate();
        p_prime.validate();
        ctl.validate();
        if (p.alpha != 1.0 || p_prime.alpha != 1.0)
            throw std::invalid_argument("Difference-of-gamma density is implemented for alpha = 1.");
        if (p.beta != p_prime.beta)
            throw std::invalid_argument("Difference-of-gamma density needs equal scales.");

        const double beta = p.beta;
        if (x >= 0.0)
            return diff_gamma_branch(x / beta, beta, p.gamma / beta, p_prime.gamma / beta, ctl);
        return diff_gamma_branch(-x / beta, beta, p_prime.gamma / beta, p.gamma / beta, ctl);
    }

    DiffGammaDensity::DiffGammaDensity(const GammaParams &p, const GammaParams &p_prime)
        : beta_(p.beta), gamma_(p.gamma), gamma_prime_(p_prime.gamma)
    {
        p.validate();
        p_prime.validate();
        if (p.alpha != 1.0 || p_prime.alpha != 1.0)
            throw std::invalid_argument("Difference-of-gamma density is implemented for alpha = 1.");
        if (p.beta != p_prime.beta)
            throw std::invalid_argument("Difference-of-gamma density needs equal scales.");

        auto weights = [&](double lambda)
        {
            std::vector<double> w(poisson_cut(lambda) + 1);
            for (std::size_t k = 0; k < w.size(); ++k)
                w[k] = log_poisson(static_cast<int>(k), lambda);
            return w;
        };
        const auto lp = weights(gamma_ / beta_);
        const auto lq = weights(gamma_prime_ / beta_);
        pos_ = coefficients(lp, lq);
        neg_ = coefficients(lq, lp);
    }

    // V_j = sum_n P_{j+n} T_n,  T_n = sum_m P'_m C(m+n, n) 2^{-(1+m+n)}; inputs are log weights.
    std::vector<double> DiffGammaDensity::coefficients(const std::vector<double> &near, const std::vector<double> &far)
    {
        const std::size_t kn = near.size(), kf = far.size();
        std::vector<double> lf(kn + kf + 1);
        for (std::size_t i = 0; i < lf.size(); ++i)
            lf[i] = std::lgamma(static_cast<double>(i) + 1.0);

        std::vector<double> t(kn, 0.0);
        for (std::size_t n = 0; n < kn; ++n)
            for (std::size_t m = 0; m < kf; ++m)
            {
                if (far[m] == neg_inf)
                    continue;
                const double lc = lf[m + n] - lf[m] - lf[n] - (1.0 + m + n) * std::numbers::ln2;
                t[n] += std::exp(far[m] + lc);
            }

        std::vector<double> v(kn, 0.0);
        for (std::size_t j = 0; j < kn; ++j)
            for (std::size_t n = 0; j + n < kn; ++n)
                if (near[j + n] != neg_inf)
                    v[j] += std::exp(near[j + n]) * t[n];
        return v;
    }

    double DiffGammaDensity::operator()(double x) const
    {
        const auto &v = x >= 0.0 ? pos_ : neg_;
        const double u = std::abs(x) / beta_;
        double acc = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j)
            acc += poisson(static_cast<int>(j), u) * v[j];
        return acc / beta_;
    }

    GaussianSerModel gaussian_approx(double power_s, double power_s_bar, double sigma_v2)
    {
        if (sigma_v2 < 0.0)
            throw std::invalid_argument("Noise variance must be non-negative.");
        return {power_s - power_s_bar, 4.0 * sigma_v2 * (power_s + power_s_bar) + 8.0 * sigma_v2 * sigma_v2};
    }

    GaussianSerModel gaussian_approx(const CRow &c_row, const ComplementarySymbol &sym, double sigma_v2)
    {
        if (sym.levels() != 2)
            throw std::invalid_argument("Gaussian approximation is defined for A = 2.");
        if (sym.size() != c_row.size())
            throw std::invalid_argument("Symbol length must match the channel row.");
        const double ps = std::norm((c_row * sym.amplitudes().cast<cplx>()).value());
        const double psb = std::norm((c_row * sym.complement().cast<cplx>()).value());
        return gaussian_approx(ps, psb, sigma_v2);
    }

    GaussianSerModel xi_gaussian(const std::vector<GaussianSerModel> &per_antenna, Eigen::Index n_t)
    {
        if (per_antenna.empty() || n_t < 1)
            throw std::invalid_argument("Need at least one antenna model.");
        GaussianSerModel out{0.0, 0.0};
        for (const auto &m : per_antenna)
        {
            out.mu += m.mu;
            out.sigma2 += m.sigma2;
        }
        const double n = static_cast<double>(n_t);
        out.mu /= n;
        out.sigma2 /= n * n;
        return out;
    }

    double normal_pdf(double x, double mu, double sigma2)
    {
        const double d = x - mu;
        return std::exp(-d * d / (2.0 * sigma2)) / std::sqrt(2.0 * pi * sigma2);
    }

    double normal_cdf(double x, double mu, double sigma2)
    {
        return 0.5 * std::erfc(-(x - mu) / std::sqrt(2.0 * sigma2));
    }

    double symbol_prob(std::size_t region, const DecisionRegions &regions, const GaussianSerModel &model)
    {
        if (!(model.sigma2 > 0.0))
            throw std::invalid_argument("Observation variance must be positive.");
        const auto [lo, hi] = region_limits(region, regions);
        return interval_mass(lo, hi, model.mu, std::sqrt(model.sigma2)).inside;
    }

    GaussianSerModel xi_model(const UplinkChannelSet &chans, const ComplementarySymbol &sym, double sigma_v2)
    {
        std::vector<GaussianSerModel> per(chans.antennas());
        for (Eigen::Index m = 0; m < chans.antennas(); ++m)
            per[m] = gaussian_approx(chans.c.row(m), sym, sigma_v2);
        return xi_gaussian(per, chans.antennas());
    }

    SerResult closed_form_ser(const RhoCoefficients &rho, const NoiseModel &noise, const UplinkChannelSet &chans, const BinaryConstellation &constellation)
    {
        if (chans.users() != constellation.dims())
            throw std::invalid_argument("Constellation dimension must match the user count.");
        if (noise.sigma2 < 0.0)
            throw std::invalid_argument("Noise variance must be non-negative.");

        const DecisionRegions regions = build_regions(rho, constellation);
        SerResult out;
        out.degenerate = regions.indistinguishable();

        double error_sum = 0.0;
        for (std::uint64_t i = 0; i < constellation.size(); ++i)
        {
            const auto r = static_cast<std::size_t>(regions.region_of[i]);
            if (regions.representative(r) != i)
            {
                error_sum += 1.0;
                continue;
            }
            const GaussianSerModel model = xi_model(chans, constellation.symbol(i), noise.per_component());
            if (model.sigma2 == 0.0)
            {
                const auto [lo, hi] = region_limits(r, regions);
                error_sum += (model.mu >= lo && model.mu < hi) ? 0.0 : 1.0;
                continue;
            }
            const auto [lo, hi] = region_limits(r, regions);
            error_sum += interval_mass(lo, hi, model.mu, std::sqrt(model.sigma2)).outside;
        }
        out.ser = error_sum / static_cast<double>(constellation.size());
        return out;
    }
}
