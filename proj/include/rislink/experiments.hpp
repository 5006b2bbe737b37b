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

#ifndef RISLINK_EXPERIMENTS_HPP
#define RISLINK_EXPERIMENTS_HPP

#include "rislink/config.hpp"
#include "rislink/curve.hpp"
#include "rislink/montecarlo.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rislink
{
    enum class Scheme
    {
        linear_precoded,
        linear_joint,
        qam_ml_baseline
    };

    enum class SweepAxis
    {
        speed,
        ebn0,
        rician_k
    };

    enum class UplinkMode
    {
        monte_carlo,
        closed_form,
        both
    };

    Scheme parse_scheme(const std::string &name);
    std::string scheme_name(Scheme scheme);
    SweepAxis parse_sweep(const std::string &name);
    std::string sweep_name(SweepAxis axis);
    UplinkMode parse_uplink_mode(const std::string &name);

    // Largest N_t accepted by the exhaustive joint detector.
    inline constexpr int joint_max_antennas = 16;

    // Gray 4-QAM: bits (b0, b1) -> ((2 b0 - 1) + j (2 b1 - 1)) / sqrt(2), decided by quadrant.
    cplx qam4_map(int b0, int b1);
    std::pair<int, int> qam4_decide(cplx r);

    /// Frame layout shared by all downlink schemes.
    struct FrameLayout
    {
        int symbols = 1020;
        int blocks = 40;
        int pilots = 32; // leading training symbols

        int block_of(int symbol) const;
        int block_start(int block) const;
    };

    FrameLayout frame_layout(const ScenarioConfig &cfg);

    /// One frame of one scheme at one operating point. Channel, geometry, pilot, noise and
    /// symbol streams are derived from (cfg.seed, trial), so schemes share channel draws.
    Tally simulate_frame(const ScenarioConfig &cfg, Scheme scheme, double ebn0_db, std::uint64_t trial);

    McControl mc_control(const ScenarioConfig &cfg, int workers);

    CurveResult run_downlink_ber(const ScenarioConfig &cfg, const std::vector<Scheme> &schemes, SweepAxis axis,
                                 const std::vector<double> &grid, int workers = 1);

    // Output SNR of the ZF-precoded link, simulated and closed form, in dB.
    CurveResult run_output_snr(const ScenarioConfig &cfg, const std::vector<double> &nt_grid, int workers = 1);

    CurveResult run_uplink_ser(const ScenarioConfig &cfg, UplinkMode mode, const std::vector<double> &ebn0_grid, int workers = 1);

    struct PdfFitPoint
    {
        double sigma_v2 = 0.0;
        double mu = 0.0;
        double sigma2 = 0.0;
        double ks_gaussian = 0.0;
        double ks_series = 0.0;
        double area_histogram = 0.0;
        double area_series = 0.0;
        double area_gaussian = 0.0;
    };

    struct PdfFitResult
    {
        CurveResult curve;
        std::vector<PdfFitPoint> points;
    };

    /// Histogram of z = |sqrt(gamma) + v1|^2 - |sqrt(gamma') + v2|^2 against the series density
    /// and its Gaussian approximation, on the standardized grid t in [-8, 8], step 0.05.
    PdfFitResult run_pdf_fit(const ScenarioConfig &cfg, const std::vector<double> &sigma_v2_points, int workers = 1);

    // Draws of z for the pdf fit, deterministic in (seed, point) for any worker count.
    std::vector<double> sample_z(double gamma, double gamma_prime, double sigma_v2, std::uint64_t count,
                                 std::uint64_t seed, std::uint64_t point, int workers = 1);
}

#endif
