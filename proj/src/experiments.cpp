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

#include "rislink/experiments.hpp"

#include "rislink/analysis.hpp"
#include "rislink/channel.hpp"
#include "rislink/downlink.hpp"
#include "rislink/rng.hpp"
#include "rislink/stats.hpp"
#include "rislink/uplink.hpp"
#include "rislink/waveform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rislink
{
    namespace
    {
        constexpr std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

        std::string num(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.9g", v);
            return buf;
        }

        std::string scenario_summary(const ScenarioConfig &cfg)
        {
            std::ostringstream s;
            s << "n_bs_antennas=" << cfg.n_bs_antennas << " n_users=" << cfg.n_users << " n_ris_elements=" << cfg.ris_nx << "x"
              << cfg.ris_ny << " rician_K=" << num(cfg.rician_K) << " rician_V=" << num(cfg.rician_V) << " speed=" << num(cfg.speed)
              << " ebn0_db=" << num(cfg.ebn0_db) << " seed=" << cfg.seed << " ris_phase_mode=" << phase_mode_name(cfg.ris_phase_mode)
              << " direct_link=" << (cfg.direct_link ? "true" : "false");
            return s.str();
        }

        struct Frame
        {
            ChannelRealization real;
            double nu0 = 0.0;
            double doppler = 0.0;
            double symbol_period = 0.0;
            FrameLayout layout;
            std::vector<CMatrix> h; // H at the start of each block

            double time(int symbol) const { return symbol * symbol_period; }
            double nu(int symbol) const { return nu0 + 2.0 * pi * doppler * time(symbol); }
            const CMatrix &channel(int symbol) const { return h[layout.block_of(symbol)]; }
        };

        Frame make_frame(const ScenarioConfig &cfg, std::uint64_t trial)
        {
            RngStream geo(cfg.seed, {trial, tag(StreamTag::geometry)});
            RngStream ch(cfg.seed, {trial, tag(StreamTag::channel)});
            const ChannelGeometry g = make_geometry(cfg, geo);
            Frame f;
            f.real = ChannelRealization(g, ch);
            f.nu0 = ch.uniform(0.0, 2.0 * pi);
            f.doppler = cfg.max_doppler();
            f.symbol_period = cfg.symbol_period;
            f.layout = frame_layout(cfg);
            for (int b = 0; b < f.layout.blocks; ++b)
                f.h.push_back(f.real.downlink(f.time(f.layout.block_start(b))));
            return f;
        }

        // Hadamard training on the channel of `block` through the correlator pair, then LS.
        EquivalentLinearChannel estimate_equiv(const Frame &f, int block, double a, double sigma2, RngStream &rng)
        {
            const int n_t = f.real.n_bs();
            const int n_k = f.real.n_users();
            const int len = f.layout.pilots;
            PilotBlock pb{hadamard_pilots(n_t, len), RMatrix(n_k, len)};
            for (int i = 0; i < len; ++i)
            {
                const RVector s = a * 0.5 * (pb.x_bar_t.col(i).array() + 1.0);
                const RVector s_bar = RVector::Constant(n_t, a) - s;
                const CMatrix &h = f.h[block];
                const double nu = f.nu(f.layout.block_start(block) + i);
                for (int m = 0; m < n_k; ++m)
                {
                    const cplx n1 = rng.complex_normal(sigma2);
                    const cplx n2 = rng.complex_normal(sigma2);
                    pb.z_t(m, i) = detect_z(receive(h.row(m), s, s_bar, nu, n1, n2));
                }
            }
            EquivalentLinearChannel est = ls_estimate(pb);
            est.h_bar /= a * a;
            return est;
        }

        Tally frame_linear_precoded(const ScenarioConfig &cfg, const Frame &f, double ebn0, std::uint64_t trial)
        {
            const int n_t = f.real.n_bs();
            const int n_k = f.real.n_users();
            const double sigma2 = cfg.noise_sigma2 ? *cfg.noise_sigma2 : zf_precoder(build_equiv_channel(f.h[0])).rho / ebn0;

            RngStream pilot_rng(cfg.seed, {trial, tag(StreamTag::pilots)});
            RngStream noise_rng(cfg.seed, {trial, tag(StreamTag::noise)});
            RngStream sym_rng(cfg.seed, {trial, tag(StreamTag::symbols)});

            const double a = 1.0 / std::sqrt(static_cast<double>(n_t));
            std::vector<RMatrix> b(f.layout.blocks);
            std::vector<double> amp(f.layout.blocks);
            for (int k = 0; k < f.layout.blocks; ++k)
            {
                const Precoder pre = zf_precoder(estimate_equiv(f, k, a, sigma2, pilot_rng));
                b[k] = build_equiv_channel(f.h[k]).h_bar * pre.p;
                amp[k] = std::sqrt(pre.rho);
            }

            Tally t{0, 0, 1};
            RVector s(n_k);
            for (int i = f.layout.pilots; i < f.layout.symbols; ++i)
            {
                for (int l = 0; l < n_k; ++l)
                    s[l] = sym_rng.bit();
                const int blk = f.layout.block_of(i);
                const RMatrix &bk = b[blk];
                const RVector hi = bk * s;
                const RVector lo = bk * (RVector::Ones(n_k) - s);
                const cplx rot = std::polar(1.0, f.nu(i));
                for (int l = 0; l < n_k; ++l)
                {
                    const cplx n1 = noise_rng.complex_normal(sigma2);
                    const cplx n2 = noise_rng.complex_normal(sigma2);
                    const double z = detect_z({rot * (amp[blk] * hi[l]) + n1, rot * (amp[blk] * lo[l]) + n2});
                    const int decided = z > 0.0 ? 1 : 0;
                    t.errors += decided != static_cast<int>(s[l]);
                }
                t.observations += static_cast<std::uint64_t>(n_k);
            }
            return t;
        }

        Tally frame_linear_joint(const ScenarioConfig &cfg, const Frame &f, double ebn0, std::uint64_t trial)
        {
            const int n_t = f.real.n_bs();
            const int n_k = f.real.n_users();
            const BinaryConstellation constellation(n_t);
            const double a = 1.0 / std::sqrt(static_cast<double>(n_t));

            double sigma2 = 0.0;
            if (cfg.noise_sigma2)
                sigma2 = *cfg.noise_sigma2;
            else
            {
                const CMatrix &h0 = f.h[0];
                double eb = 0.0;
                for (int m = 0; m < n_k; ++m)
                    eb += 0.5 * (std::norm(h0.row(m).sum()) + h0.row(m).squaredNorm());
                eb *= a * a / (static_cast<double>(n_k) * n_t);
                sigma2 = eb / ebn0;
            }

            RngStream pilot_rng(cfg.seed, {trial, tag(StreamTag::pilots)});
            RngStream noise_rng(cfg.seed, {trial, tag(StreamTag::noise)});
            RngStream sym_rng(cfg.seed, {trial, tag(StreamTag::symbols)});

            std::vector<JointDetector> detectors;
            for (int k = 0; k < f.layout.blocks; ++k)
            {
                EquivalentLinearChannel est = estimate_equiv(f, k, a, sigma2, pilot_rng);
                est.h_bar *= a * a;
                detectors.emplace_back(est, constellation);
            }
            const std::uint64_t mask = constellation.size() - 1;

            Tally t{0, 0, 1};
            RVector z(n_k);
            for (int i = f.layout.pilots; i < f.layout.symbols; ++i)
            {
                const std::uint64_t idx = sym_rng.bits() & mask;
                const ComplementarySymbol sym = constellation.symbol(idx);
                const RVector s = a * sym.amplitudes();
                const RVector s_bar = a * sym.complement();
                const CMatrix &h = f.channel(i);
                for (int m = 0; m < n_k; ++m)
                {
                    const cplx n1 = noise_rng.complex_normal(sigma2);
                    const cplx n2 = noise_rng.complex_normal(sigma2);
                    z[m] = detect_z(receive(h.row(m), s, s_bar, f.nu(i), n1, n2));
                }
                t.errors += static_cast<std::uint64_t>(std::popcount(idx ^ detectors[f.layout.block_of(i)].detect(z)));
                t.observations += static_cast<std::uint64_t>(n_t);
            }
            return t;
        }

        // Complex ZF toward the users; returns W (N_t x N_k) and rho = 1 / tr((H H^H)^-1).
        std::pair<CMatrix, double> complex_zf(const CMatrix &h)
        {
            Eigen::JacobiSVD<CMatrix> svd(h);
            const RVector sv = svd.singularValues();
            if (sv.maxCoeff() == 0.0 || sv.minCoeff() < zf_rank_tolerance * sv.maxCoeff())
                throw RankDeficientError("Baseline channel estimate is rank deficient.");
            const CMatrix gram = h * h.adjoint();
            const CMatrix inv = gram.llt().solve(CMatrix::Identity(h.rows(), h.rows()));
            return {h.adjoint() * inv, 1.0 / inv.trace().real()};
        }

        Tally frame_qam_baseline(const ScenarioConfig &cfg, const Frame &f, double ebn0, std::uint64_t trial)
        {
            const int n_t = f.real.n_bs();
            const int n_k = f.real.n_users();
            const double sigma2 = cfg.noise_sigma2 ? *cfg.noise_sigma2 : complex_zf(f.h[0]).second / (2.0 * ebn0);
            const double est_var = sigma2 / f.layout.pilots;

            RngStream pilot_rng(cfg.seed, {trial, tag(StreamTag::pilots)});
            RngStream noise_rng(cfg.seed, {trial, tag(StreamTag::noise)});
            RngStream sym_rng(cfg.seed, {trial, tag(StreamTag::symbols)});

            Tally t{0, 0, 1};
            CVector q(n_k);
            std::vector<int> bits(2 * n_k);
            for (int blk = 0; blk < f.layout.blocks; ++blk)
            {
                const int first = std::max(f.layout.block_start(blk), f.layout.pilots);
                const int last = blk + 1 < f.layout.blocks ? f.layout.block_start(blk + 1) : f.layout.symbols;
                const CMatrix &h = f.h[blk];
                // per-block CSI, estimated at the block start with the rotation of that instant
                const int start = f.layout.block_start(blk);
                const CMatrix h_hat = std::polar(1.0, f.nu(start)) * h + pilot_rng.complex_normal_matrix(n_k, n_t, est_var);
                if (first >= last)
                    continue;
                const auto [w, rho] = complex_zf(h_hat);
                const CMatrix eff = std::sqrt(rho) * (h * w);

                for (int i = first; i < last; ++i)
                {
                    for (int l = 0; l < n_k; ++l)
                    {
                        bits[2 * l] = sym_rng.bit();
                        bits[2 * l + 1] = sym_rng.bit();
                        q[l] = qam4_map(bits[2 * l], bits[2 * l + 1]);
                    }
                    const CVector y = std::polar(1.0, f.nu(i)) * (eff * q);
                    for (int l = 0; l < n_k; ++l)
                    {
                        const auto [d0, d1] = qam4_decide(y[l] + noise_rng.complex_normal(sigma2));
                        t.errors += (d0 != bits[2 * l]) + (d1 != bits[2 * l + 1]);
                    }
                    t.observations += static_cast<std::uint64_t>(2 * n_k);
                }
            }
            return t;
        }

        std::vector<std::string> mapping_comments()
        {
            return {
                "ebn0 mapping linear_precoded: sigma2 = rho / (Eb/N0), rho = 1 / (2 tr((Hbar Hbar^T)^-1)) of the true channel at frame start",
                "ebn0 mapping linear_joint: sigma2 = Eb / (Eb/N0), Eb = mean_m (|h_m 1|^2 + ||h_m||^2) / (2 N_t^2)",
                "ebn0 mapping qam_ml_baseline: sigma2 = rho_c / (2 Eb/N0), rho_c = 1 / tr((H H^H)^-1) of the true channel at frame start",
                "sigma2 is the complex noise variance of each correlator branch",
                "every scheme refreshes its channel estimate once per block from the training length of observations",
            };
        }
    }

    cplx qam4_map(int b0, int b1)
    {
        return cplx(2.0 * b0 - 1.0, 2.0 * b1 - 1.0) / std::sqrt(2.0);
    }

    std::pair<int, int> qam4_decide(cplx r)
    {
        return {r.real() > 0.0 ? 1 : 0, r.imag() > 0.0 ? 1 : 0};
    }

    Scheme parse_scheme(const std::string &name)
    {
        if (name == "linear_precoded")
            return Scheme::linear_precoded;
        if (name == "linear_joint")
            return Scheme::linear_joint;
        if (name == "qam_ml_baseline")
            return Scheme::qam_ml_baseline;
        throw std::invalid_argument("unknown scheme '" + name + "'");
    }

    std::string scheme_name(Scheme scheme)
    {
        switch (scheme)
        {
        case Scheme::linear_precoded:
            return "linear_precoded";
        case Scheme::linear_joint:
            return "linear_joint";
        case Scheme::qam_ml_baseline:
            return "qam_ml_baseline";
        }
        return "";
    }

    SweepAxis parse_sweep(const std::string &name)
    {
        if (name == "speed")
            return SweepAxis::speed;
        if (name == "ebn0")
            return SweepAxis::ebn0;
        if (name == "rician_k")
            return SweepAxis::rician_k;
        throw std::invalid_argument("unknown sweep axis '" + name + "'");
    }

    std::string sweep_name(SweepAxis axis)
    {
        switch (axis)
        {
        case SweepAxis::speed:
            return "speed_mps";
        case SweepAxis::ebn0:
            return "ebn0_db";
        case SweepAxis::rician_k:
            return "rician_k";
        }
        return "";
    }

    UplinkMode parse_uplink_mode(const std::string &name)
    {
        if (name == "monte_carlo")
            return UplinkMode::monte_carlo;
        if (name == "closed_form")
            return UplinkMode::closed_form;
        if (name == "both")
            return UplinkMode::both;
        throw std::invalid_argument("unknown uplink mode '" + name + "'");
    }

    int FrameLayout::block_of(int symbol) const
    {
        return static_cast<int>(static_cast<long long>(symbol) * blocks / symbols);
    }

    int FrameLayout::block_start(int block) const
    {
        return static_cast<int>((static_cast<long long>(block) * symbols + blocks - 1) / blocks);
    }

    FrameLayout frame_layout(const ScenarioConfig &cfg)
    {
        FrameLayout lay;
        lay.symbols = cfg.symbols_per_frame;
        lay.blocks = cfg.blocks_per_frame;
        lay.pilots = pilot_length_for(cfg.n_bs_antennas, cfg.pilot_length);
        if (lay.blocks > lay.symbols)
            throw ConfigError("invalid value for 'blocks_per_frame': more blocks than symbols per frame");
        if (lay.pilots >= lay.symbols)
            throw ConfigError("invalid value for 'symbols_per_frame': the training sequence fills the whole frame");
        return lay;
    }

    Tally simulate_frame(const ScenarioConfig &cfg, Scheme scheme, double ebn0_db, std::uint64_t trial)
    {
        if (scheme == Scheme::linear_joint && cfg.n_bs_antennas > joint_max_antennas)
            throw SearchTooLargeError("linear_joint needs n_bs_antennas <= 16 for exhaustive search.");
        const Frame f = make_frame(cfg, trial);
        const double ebn0 = db_to_linear(ebn0_db);
        switch (scheme)
        {
        case Scheme::linear_precoded:
            return frame_linear_precoded(cfg, f, ebn0, trial);
        case Scheme::linear_joint:
            return frame_linear_joint(cfg, f, ebn0, trial);
        case Scheme::qam_ml_baseline:
            return frame_qam_baseline(cfg, f, ebn0, trial);
        }
        throw std::invalid_argument("unknown scheme");
    }

    McControl mc_control(const ScenarioConfig &cfg, int workers)
    {
        McControl ctl;
        ctl.min_trials = cfg.min_trials;
        ctl.max_trials = cfg.max_trials;
        ctl.target_errors = cfg.target_errors;
        ctl.batch_size = cfg.batch_size;
        ctl.workers = workers;
        return ctl;
    }

    CurveResult run_downlink_ber(const ScenarioConfig &cfg, const std::vector<Scheme> &schemes, SweepAxis axis,
                                 const std::vector<double> &grid, int workers)
    {
        cfg.validate();
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw ConfigError("sweep grid must be strictly increasing");
        for (Scheme s : schemes)
            if (s == Scheme::linear_joint && cfg.n_bs_antennas > joint_max_antennas)
                throw SearchTooLargeError("linear_joint needs n_bs_antennas <= 16 for exhaustive search.");
        frame_layout(cfg);

        CurveResult out;
        out.x_name = sweep_name(axis);
        out.x = grid;
        out.comments = mapping_comments();
        out.comments.push_back("downlink BER, one trial = one frame; " + scenario_summary(cfg));
        const FrameLayout lay = frame_layout(cfg);
        out.comments.push_back("frame: " + std::to_string(lay.symbols) + " symbols, " + std::to_string(lay.blocks) +
                               " blocks, " + std::to_string(lay.pilots) + " training symbols");
        for (Scheme s : schemes)
            out.series.push_back(Series{"ber_" + scheme_name(s), {}, {}, {}});

        for (double x : grid)
        {
            ScenarioConfig point = cfg;
            double ebn0_db = cfg.ebn0_db;
            switch (axis)
            {
            case SweepAxis::speed:
                point.speed = x;
                break;
            case SweepAxis::ebn0:
                ebn0_db = x;
                break;
            case SweepAxis::rician_k:
                point.rician_K = point.rician_V = x;
                break;
            }
            point.validate();
            for (std::size_t k = 0; k < schemes.size(); ++k)
            {
                const Scheme scheme = schemes[k];
                const Tally t = run_monte_carlo(mc_control(point, workers),
                                                [&](std::uint64_t trial) { return simulate_frame(point, scheme, ebn0_db, trial); });
                out.series[k].push(t.rate(), t.trials, t.ci95());
            }
        }
        return out;
    }

    CurveResult run_output_snr(const ScenarioConfig &cfg, const std::vector<double> &nt_grid, int workers)
    {
        cfg.validate();
        const double sigma2 = cfg.noise_sigma2.value_or(0.01);
        if (!(sigma2 > 0.0))
            throw ConfigError("invalid value for 'noise_sigma2': output SNR needs a positive noise variance");
        const int n_k = cfg.n_users;

        CurveResult out;
        out.x_name = "n_bs_antennas";
        out.comments.push_back("output SNR of the ZF-precoded link in dB, sigma2=" + num(sigma2) + ", n_users=" + std::to_string(n_k) +
                               ", channel=" + cfg.output_snr_channel + ", seed=" + std::to_string(cfg.seed));
        out.comments.push_back("simulated = sum rho^2 / sum (z - rho x_bar)^2 over draws and symbols; exact = mean of rho / (2 sigma2 + 3 sigma2^2 / 4)");
        out.comments.push_back("closed form = (N_t - N_k - 1) / (4 N_k sigma2)");
        Series sim{"sim_snr_db", {}, {}, {}}, eq23{"closed_form_snr_db", {}, {}, {}}, exact{"exact_snr_db", {}, {}, {}};

        for (double ntd : nt_grid)
        {
            const int n_t = static_cast<int>(ntd);
            if (ntd != n_t || n_t <= n_k + 1)
                throw ConfigError("output-snr grid entries must be integers above n_users + 1");

            const auto draws = static_cast<std::uint64_t>(cfg.output_snr_draws);
            std::vector<double> sig(draws), err(draws), ex(draws), per_db(draws);
            ScenarioConfig ccfg = cfg;
            ccfg.n_bs_antennas = n_t;
            parallel_for(draws, workers, [&](std::uint64_t d)
                         {
                RngStream ch(cfg.seed, {d, tag(StreamTag::channel)});
                RngStream nz(cfg.seed, {d, tag(StreamTag::noise)});
                RngStream sy(cfg.seed, {d, tag(StreamTag::symbols)});
                EquivalentLinearChannel hb;
                if (cfg.output_snr_channel == "iid")
                {
                    hb.h_bar.resize(n_k, n_t);
                    for (int c = 0; c < n_t; ++c)
                        for (int r = 0; r < n_k; ++r)
                            hb.h_bar(r, c) = ch.normal();
                }
                else
                {
                    RngStream geo(cfg.seed, {d, tag(StreamTag::geometry)});
                    const ChannelRealization real(make_geometry(ccfg, geo), ch);
                    hb = build_equiv_channel(real.downlink(0.0));
                    hb.h_bar /= std::sqrt(hb.h_bar.squaredNorm() / hb.h_bar.size());
                }
                const Precoder pre = zf_precoder(hb);
                const RMatrix b = hb.h_bar * pre.p;
                const double amp = std::sqrt(pre.rho);
                double e = 0.0;
                RVector s(n_k);
                for (int i = 0; i < cfg.output_snr_symbols; ++i)
                {
                    for (int l = 0; l < n_k; ++l)
                        s[l] = sy.bit();
                    const RVector hi = b * s;
                    const RVector lo = b * (RVector::Ones(n_k) - s);
                    for (int l = 0; l < n_k; ++l)
                    {
                        const cplx n1 = nz.complex_normal(sigma2);
                        const cplx n2 = nz.complex_normal(sigma2);
                        const double z = detect_z({amp * hi[l] + n1, amp * lo[l] + n2});
                        const double d2 = z - pre.rho * (2.0 * s[l] - 1.0);
                        e += d2 * d2;
                    }
                }
                const double count = static_cast<double>(cfg.output_snr_symbols) * n_k;
                sig[d] = pre.rho * pre.rho * count;
                err[d] = e;
                ex[d] = pre.rho / (2.0 * sigma2 + 0.75 * sigma2 * sigma2);
                per_db[d] = linear_to_db(sig[d] / e); });

            double s_sum = 0.0, e_sum = 0.0, x_sum = 0.0, db_mean = 0.0;
            for (std::uint64_t d = 0; d < draws; ++d)
            {
                s_sum += sig[d];
                e_sum += err[d];
                x_sum += ex[d];
                db_mean += per_db[d];
            }
            db_mean /= static_cast<double>(draws);
            double db_var = 0.0;
            for (double v : per_db)
                db_var += (v - db_mean) * (v - db_mean);
            db_var /= std::max<double>(1.0, static_cast<double>(draws) - 1.0);

            out.x.push_back(ntd);
            sim.push(linear_to_db(s_sum / e_sum), draws, 1.96 * std::sqrt(db_var / static_cast<double>(draws)));
            eq23.push(linear_to_db(output_snr_asymptotic(n_t, n_k, sigma2)), 0, 0.0);
            exact.push(linear_to_db(x_sum / static_cast<double>(draws)), draws, 0.0);
        }
        out.series = {sim, eq23, exact};
        return out;
    }

    CurveResult run_uplink_ser(const ScenarioConfig &cfg, UplinkMode mode, const std::vector<double> &ebn0_grid, int workers)
    {
        cfg.validate();
        for (std::size_t i = 1; i < ebn0_grid.size(); ++i)
            if (!(ebn0_grid[i] > ebn0_grid[i - 1]))
                throw ConfigError("Eb/N0 grid must be strictly increasing");
        const BinaryConstellation constellation(cfg.n_users);

        RngStream geo(cfg.seed, {0, tag(StreamTag::geometry)});
        RngStream ch(cfg.seed, {0, tag(StreamTag::channel)});
        ChannelGeometry g = make_geometry(cfg, geo);
        g.max_doppler = 0.0;
        const ChannelRealization real(g, ch);
        const UplinkChannelSet chans = UplinkChannelSet::from_realization(real, 0.0);
        const RhoCoefficients rho = rho_exact(chans);
        const DecisionRegions regions = build_regions(rho, constellation);

        double eb = 0.0;
        for (Eigen::Index m = 0; m < chans.antennas(); ++m)
            eb += 0.5 * (std::norm(chans.c.row(m).sum()) + chans.c.row(m).squaredNorm());
        eb /= static_cast<double>(chans.antennas()) * cfg.n_users;

        CurveResult out;
        out.x_name = "ebn0_db";
        out.comments.push_back("uplink SER on a static channel, one trial = one symbol; " + scenario_summary(cfg));
        out.comments.push_back("ebn0 mapping: sigma2 = Eb / (Eb/N0), Eb = mean_m (|c_m 1|^2 + ||c_m||^2) / (2 N_k) = " + num(eb));
        out.comments.push_back("detector: decision regions on the antenna average xi with exact coefficients");
        if (regions.indistinguishable())
            out.comments.push_back("warning: some constellation points share a noiseless mean; they are counted as errors");

        const bool do_mc = mode != UplinkMode::closed_form;
        const bool do_cf = mode != UplinkMode::monte_carlo;
        Series mc{"ser_monte_carlo", {}, {}, {}}, cf{"ser_closed_form", {}, {}, {}};
        const std::uint64_t mask = constellation.size() - 1;

        for (double x : ebn0_grid)
        {
            const double sigma2 = cfg.noise_sigma2 ? *cfg.noise_sigma2 : eb / db_to_linear(x);
            out.x.push_back(x);
            if (do_mc)
            {
                McControl ctl = mc_control(cfg, workers);
                ctl.max_trials = cfg.uplink_max_trials;
                ctl.target_errors = cfg.uplink_target_errors;
                ctl.batch_size = std::max<std::uint64_t>(cfg.batch_size, 1000);
                const Tally t = run_monte_carlo(ctl, [&](std::uint64_t trial)
                                                {
                    RngStream sy(cfg.seed, {trial, tag(StreamTag::symbols)});
                    RngStream nz(cfg.seed, {trial, tag(StreamTag::noise)});
                    const std::uint64_t idx = sy.bits() & mask;
                    const ComplementarySymbol sym = constellation.symbol(idx);
                    const CVector cs = chans.c * sym.amplitudes().cast<cplx>();
                    const CVector csb = chans.c * sym.complement().cast<cplx>();
                    double acc = 0.0;
                    for (Eigen::Index m = 0; m < chans.antennas(); ++m)
                    {
                        const cplx v1 = nz.complex_normal(sigma2);
                        const cplx v2 = nz.complex_normal(sigma2);
                        acc += std::norm(cs[m] + v1) - std::norm(csb[m] + v2);
                    }
                    const double xi = acc / static_cast<double>(chans.antennas());
                    const std::size_t r = region_detect(xi, regions);
                    return Tally{regions.representative(r) != idx ? 1u : 0u, 1, 1}; });
                mc.push(t.rate(), t.trials, t.ci95());
            }
            else
                mc.push(std::nan(""), 0, 0.0);
            if (do_cf)
                cf.push(closed_form_ser(rho, NoiseModel{sigma2}, chans, constellation).ser, 0, 0.0);
            else
                cf.push(std::nan(""), 0, 0.0);
        }
        if (do_mc && do_cf)
            for (std::size_t i = 0; i < out.x.size(); ++i)
                if (mc.values[i] > 0.0)
                    out.comments.push_back("ebn0_db=" + num(out.x[i]) + " relative difference closed form vs Monte Carlo = " +
                                           num((cf.values[i] - mc.values[i]) / mc.values[i]));
        if (do_mc)
            out.series.push_back(mc);
        if (do_cf)
            out.series.push_back(cf);
        return out;
    }

    std::vector<double> sample_z(double gamma, double gamma_prime, double sigma_v2, std::uint64_t count,
                                 std::uint64_t seed, std::uint64_t point, int workers)
    {
        constexpr std::uint64_t chunk = 65536;
        const double a = std::sqrt(gamma), b = std::sqrt(gamma_prime);
        std::vector<double> out(count);
        const std::uint64_t chunks = (count + chunk - 1) / chunk;
        parallel_for(chunks, workers, [&](std::uint64_t c)
                     {
            RngStream rng(seed, {point, c, tag(StreamTag::noise)});
            const std::uint64_t end = std::min(count, (c + 1) * chunk);
            for (std::uint64_t i = c * chunk; i < end; ++i)
            {
                const cplx v1 = rng.complex_normal(2.0 * sigma_v2);
                const cplx v2 = rng.complex_normal(2.0 * sigma_v2);
                out[i] = std::norm(a + v1) - std::norm(b + v2);
            } });
        return out;
    }

    PdfFitResult run_pdf_fit(const ScenarioConfig &cfg, const std::vector<double> &sigma_v2_points, int workers)
    {
        cfg.validate();
        constexpr double step = 0.05;
        std::vector<double> t;
        for (int k = -160; k <= 160; ++k)
            t.push_back(k * step);

        PdfFitResult res;
        CurveResult &out = res.curve;
        out.x_name = "t";
        out.x = t;
        out.comments.push_back("z = |sqrt(gamma) + v1|^2 - |sqrt(gamma') + v2|^2 with gamma=" + num(cfg.pdf_gamma) +
                               ", gamma'=" + num(cfg.pdf_gamma_prime) + ", samples=" + std::to_string(cfg.pdf_samples) +
                               ", seed=" + std::to_string(cfg.seed));
        out.comments.push_back("densities are in standardized units t = (z - mu) / sigma; histogram bins have width 0.05");

        for (std::size_t p = 0; p < sigma_v2_points.size(); ++p)
        {
            const double sv2 = sigma_v2_points[p];
            if (!(sv2 > 0.0))
                throw ConfigError("pdf-fit grid entries (sigma_v^2) must be positive");
            std::vector<double> z = sample_z(cfg.pdf_gamma, cfg.pdf_gamma_prime, sv2, cfg.pdf_samples, cfg.seed, p, workers);
            std::sort(z.begin(), z.end());

            const GaussianSerModel g = gaussian_approx(cfg.pdf_gamma, cfg.pdf_gamma_prime, sv2);
            const double sd = std::sqrt(g.sigma2);
            const double beta = 2.0 * sv2;
            const DiffGammaDensity density({1.0, beta, cfg.pdf_gamma}, {1.0, beta, cfg.pdf_gamma_prime});

            const double n = static_cast<double>(z.size());
            Series hist{"hist_p" + std::to_string(p), {}, {}, {}};
            Series ser{"series_p" + std::to_string(p), {}, {}, {}};
            Series gau{"gauss_p" + std::to_string(p), {}, {}, {}};
            for (double tk : t)
            {
                const double lo = g.mu + sd * (tk - 0.5 * step);
                const double hi = g.mu + sd * (tk + 0.5 * step);
                const auto cnt = std::lower_bound(z.begin(), z.end(), hi) - std::lower_bound(z.begin(), z.end(), lo);
                const double frac = static_cast<double>(cnt) / n;
                hist.push(frac / step, z.size(), 1.96 * std::sqrt(frac * (1.0 - frac) / n) / step);
                ser.push(sd * density(g.mu + sd * tk), 0, 0.0);
                gau.push(normal_pdf(tk, 0.0, 1.0), 0, 0.0);
            }

            PdfFitPoint pt;
            pt.sigma_v2 = sv2;
            pt.mu = g.mu;
            pt.sigma2 = g.sigma2;
            pt.ks_gaussian = ks_distance(z, [&](double x) { return normal_cdf(x, g.mu, g.sigma2); });
            const TabulatedCdf cdf([&](double x) { return density(x); }, z.front() - 20.0 * beta, z.back() + 20.0 * beta, 40000);
            pt.ks_series = ks_distance(z, [&](double x) { return cdf(x); });
            pt.area_histogram = trapezoid(t, hist.values);
            pt.area_series = trapezoid(t, ser.values);
            pt.area_gaussian = trapezoid(t, gau.values);
            res.points.push_back(pt);

            out.comments.push_back("p" + std::to_string(p) + ": sigma_v2=" + num(sv2) + " mu=" + num(g.mu) + " sigma2=" + num(g.sigma2) +
                                   " ks_gaussian=" + num(pt.ks_gaussian) + " ks_series=" + num(pt.ks_series));
            out.series.push_back(hist);
            out.series.push_back(ser);
            out.series.push_back(gau);
        }
        return res;
    }
}
