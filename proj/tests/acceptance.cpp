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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "rislink/analysis.hpp"
#include "rislink/config.hpp"
#include "rislink/downlink.hpp"
#include "rislink/experiments.hpp"
#include "rislink/rng.hpp"
#include "rislink/stats.hpp"
#include "rislink/waveform.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#ifndef RISLINK_CLI_PATH
#error "RISLINK_CLI_PATH must point at the rislink executable"
#endif

using namespace rislink;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return buf;
    }

    CMatrix random_channel(RngStream &rng, Eigen::Index rows, Eigen::Index cols)
    {
        CMatrix h(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                h(i, j) = rng.complex_normal(1.0);
        return h;
    }

    ComplementarySymbol random_symbol(RngStream &rng, int n)
    {
        const auto idx = static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(std::uint64_t{1} << n));
        return ComplementarySymbol::from_index(std::min(idx, (std::uint64_t{1} << n) - 1), n);
    }

    Outcome linear_model_exactness()
    {
        RngStream rng(101);
        double worst = 0.0;
        for (int inst = 0; inst < 10000; ++inst)
        {
            const int nt = 1 + static_cast<int>(rng.uniform() * 8.0);
            const int nk = 1 + static_cast<int>(rng.uniform() * 4.0);
            const CMatrix h = random_channel(rng, nk, nt);
            const ComplementarySymbol sym = random_symbol(rng, nt);
            const RVector x = sym.x_bar();
            for (int k = 0; k < nk; ++k)
            {
                const CRow row = h.row(k);
                const double z = detect_z(receive(row, sym.amplitudes(), sym.complement(), 0.0, 0.0, 0.0));
                const cplx lambda = std::conj(row.sum());
                const double oracle = (lambda * row).real().dot(x.transpose());
                worst = std::max(worst, std::abs(z - oracle));
            }
        }
        return {worst < 1e-12, "max |z - Re(conj(h 1) h) x_bar| = " + fmt(worst)};
    }

    Outcome doppler_invariance()
    {
        RngStream rng(102);
        double worst = 0.0;
        for (int inst = 0; inst < 10000; ++inst)
        {
            const int nt = 1 + static_cast<int>(rng.uniform() * 8.0);
            const CMatrix h = random_channel(rng, 1, nt);
            const ComplementarySymbol sym = random_symbol(rng, nt);
            const double nu = rng.uniform(0.0, 2.0 * pi);
            const CorrelatorPair pair = receive(h.row(0), sym.amplitudes(), sym.complement(), 0.0, rng.complex_normal(0.1), rng.complex_normal(0.1));
            worst = std::max(worst, std::abs(detect_z(apply_doppler(pair, nu)) - detect_z(pair)));
        }
        return {worst < 1e-12, "max |z(nu) - z(0)| = " + fmt(worst)};
    }

    Outcome zf_identity()
    {
        RngStream rng(103);
        double worst_identity = 0.0, worst_roundtrip = 0.0;
        bool signs = true;
        for (int nt : {16, 64, 128})
            for (int inst = 0; inst < 1000; ++inst)
            {
                const EquivalentLinearChannel chan = build_equiv_channel(random_channel(rng, 8, nt));
                const Precoder pre = zf_precoder(chan);
                const RMatrix eye = RMatrix::Identity(8, 8);
                worst_identity = std::max(worst_identity, (chan.h_bar * pre.p - eye).cwiseAbs().maxCoeff());
                for (int rep = 0; rep < 100; ++rep)
                {
                    const ComplementarySymbol sym = random_symbol(rng, 8);
                    const RVector out = precoded_roundtrip(chan, pre, sym);
                    const RVector x = sym.x_bar();
                    worst_roundtrip = std::max(worst_roundtrip, (out - x).cwiseAbs().maxCoeff());
                    for (int k = 0; k < 8; ++k)
                        signs = signs && ((out[k] > 0.0) == (x[k] > 0.0));
                }
            }
        return {worst_identity < 1e-9 && worst_roundtrip < 1e-9 && signs,
                "max |H_bar P - I| = " + fmt(worst_identity) + ", max roundtrip error = " + fmt(worst_roundtrip)};
    }

    Outcome output_snr()
    {
        ScenarioConfig cfg = parse_scenario("n_users: 8\nnoise_sigma2: 0.01\noutput_snr_draws: 200\n");
        const CurveResult r = run_output_snr(cfg, {32.0, 64.0, 128.0});
        const Series &sim = r.find("sim_snr_db");
        const Series &eq = r.find("closed_form_snr_db");
        double worst = 0.0;
        std::string detail;
        for (std::size_t i = 0; i < r.x.size(); ++i)
        {
            worst = std::max(worst, std::abs(sim.values[i] - eq.values[i]));
            detail += "N_t=" + fmt(r.x[i]) + ": " + fmt(sim.values[i]) + " vs " + fmt(eq.values[i]) + " dB; ";
        }
        return {worst < 1.0, detail + "max gap " + fmt(worst) + " dB"};
    }

    using Fn = std::function<double(double)>;

    double call(double x, void *p) { return (*static_cast<Fn *>(p))(x); }

    double integrate(Fn f, double lo, double mid, double hi)
    {
        gsl_integration_workspace *w = gsl_integration_workspace_alloc(4000);
        gsl_function g{&call, &f};
        double a = 0.0, b = 0.0, err = 0.0;
        gsl_integration_qag(&g, lo, mid, 1e-14, 1e-12, 4000, GSL_INTEG_GAUSS61, w, &a, &err);
        gsl_integration_qag(&g, mid, hi, 1e-14, 1e-12, 4000, GSL_INTEG_GAUSS61, w, &b, &err);
        gsl_integration_workspace_free(w);
        return a + b;
    }

    std::vector<double> sorted_draws(std::uint64_t seed, const std::function<double(RngStream &)> &gen)
    {
        RngStream rng(seed);
        std::vector<double> out(1000000);
        for (double &x : out)
            x = gen(rng);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<double> quantile_edges(const std::vector<double> &sorted, int bins)
    {
        std::vector<double> edges;
        for (int b = 1; b < bins; ++b)
            edges.push_back(sorted[sorted.size() * b / bins]);
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return edges;
    }

    Outcome distribution_stack()
    {
        struct Set
        {
            double sigma_v2, gamma, gamma_prime;
        };
        const Set sets[] = {{0.25, 1.0, 0.0}, {0.1, 2.0, 0.5}, {0.5, 0.5, 1.5}};

        bool ok = true;
        double worst_area = 0.0, worst_p = 1.0;
        std::uint64_t seed = 500;
        for (const Set &s : sets)
        {
            const double beta = 2.0 * s.sigma_v2;
            const GammaParams p{1.0, beta, s.gamma}, q{1.0, beta, s.gamma_prime};
            const double r_bar = std::sqrt(s.gamma);
            const double span = 60.0 * beta + 4.0 * (s.gamma + s.gamma_prime) + 10.0;

            const double a_gamma = integrate([&](double x) { return gamma_pdf(x, p); }, 0.0, s.gamma + 1.0, span);
            const double a_rice = integrate([&](double t) { return rician_envelope_pdf(t, r_bar, s.sigma_v2); }, 0.0, r_bar + 1.0, std::sqrt(span));
            const double a_diff = integrate([&](double x) { return diff_gamma_pdf(x, p, q); }, -span, 0.0, span);
            for (double a : {a_gamma, a_rice, a_diff})
                worst_area = std::max(worst_area, std::abs(a - 1.0));

            const auto g = sorted_draws(seed++, [&](RngStream &r) { return std::norm(r_bar + r.complex_normal(beta)); });
            const TabulatedCdf g_cdf([&](double x) { return gamma_pdf(x, p); }, 0.0, span, 400000);
            const auto env = sorted_draws(seed++, [&](RngStream &r) { return std::abs(r_bar + r.complex_normal(beta)); });
            const TabulatedCdf e_cdf([&](double t) { return rician_envelope_pdf(t, r_bar, s.sigma_v2); }, 0.0, std::sqrt(span), 400000);
            const double rp = std::sqrt(s.gamma_prime);
            const auto d = sorted_draws(seed++, [&](RngStream &r)
                                        { return std::norm(r_bar + r.complex_normal(beta)) - std::norm(rp + r.complex_normal(beta)); });
            const DiffGammaDensity fast(p, q);
            const TabulatedCdf d_cdf([&](double x) { return fast(x); }, -span, span, 400000);

            for (const auto &[samples, cdf] : {std::pair{&g, &g_cdf}, std::pair{&env, &e_cdf}, std::pair{&d, &d_cdf}})
            {
                const auto fit = chi_square_gof(*samples, quantile_edges(*samples, 100), [&](double x) { return (*cdf)(x); });
                worst_p = std::min(worst_p, fit.p_value);
                ok = ok && fit.p_value > 0.01;
            }
        }
        return {ok && worst_area < 1e-6, "max |area - 1| = " + fmt(worst_area) + ", min chi-square p = " + fmt(worst_p)};
    }

    Outcome gaussian_approximation()
    {
        const ScenarioConfig cfg = parse_scenario("pdf_gamma: 1\npdf_gamma_prime: 0\npdf_samples: 1000000\n");
        const PdfFitResult r = run_pdf_fit(cfg, {0.001, 0.01, 0.1});
        const double k0 = r.points[0].ks_gaussian, k1 = r.points[1].ks_gaussian, k2 = r.points[2].ks_gaussian;
        return {k0 < 0.02 && k0 < k1 && k1 < k2, "KS at sigma_v^2 = 0.001, 0.01, 0.1: " + fmt(k0) + ", " + fmt(k1) + ", " + fmt(k2)};
    }

    Outcome closed_form_ser()
    {
        ScenarioConfig cfg = parse_scenario("n_bs_antennas: 64\nrician_factor: 10\n");
        apply_desk_scale(cfg);
        std::vector<double> grid;
        for (double e = 0.0; e <= 28.0; e += 4.0)
            grid.push_back(e);
        const CurveResult r = run_uplink_ser(cfg, UplinkMode::both, grid);
        const Series &mc = r.find("ser_monte_carlo");
        const Series &cf = r.find("ser_closed_form");
        const double half = 0.5 * (grid.front() + grid.back());
        bool ok = true;
        int checked = 0;
        std::string detail;
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            if (grid[i] < half || mc.values[i] < 1e-3)
                continue;
            const double rel = std::abs(cf.values[i] - mc.values[i]) / mc.values[i];
            ok = ok && rel < 0.10;
            ++checked;
            detail += fmt(grid[i]) + " dB: mc " + fmt(mc.values[i]) + " cf " + fmt(cf.values[i]) + " (" + fmt(100.0 * rel) + "%); ";
        }
        return {ok && checked > 0, detail + std::to_string(checked) + " points checked"};
    }

    ScenarioConfig desk(const std::string &extra = "")
    {
        ScenarioConfig cfg = parse_scenario(extra);
        apply_desk_scale(cfg);
        return cfg;
    }

    Outcome mobility_robustness()
    {
        const CurveResult r = run_downlink_ber(desk(), {Scheme::linear_precoded, Scheme::qam_ml_baseline}, SweepAxis::speed, {10.0, 50.0});
        const Series &lin = r.find("ber_linear_precoded");
        const Series &qam = r.find("ber_qam_ml_baseline");
        const double qam_ratio = qam.values[1] / qam.values[0];
        const double lo = std::min(lin.values[0], lin.values[1]), hi = std::max(lin.values[0], lin.values[1]);
        const double lin_ratio = hi / lo;
        return {qam_ratio >= 10.0 && lin_ratio < 3.0,
                "baseline " + fmt(qam.values[0]) + " -> " + fmt(qam.values[1]) + " (x" + fmt(qam_ratio) + "), linear " + fmt(lin.values[0]) +
                    " -> " + fmt(lin.values[1]) + " (x" + fmt(lin_ratio) + ")"};
    }

    Outcome rician_trend()
    {
        ScenarioConfig cfg = desk("target_errors: 10000\n");
        const CurveResult r = run_downlink_ber(cfg, {Scheme::linear_precoded}, SweepAxis::rician_k, {1.0, 10.0, 100.0});
        const Series &s = r.series[0];
        bool ok = true;
        for (std::size_t i = 1; i < s.values.size(); ++i)
            ok = ok && s.values[i] <= s.values[i - 1];
        std::string detail;
        for (std::size_t i = 0; i < s.values.size(); ++i)
            detail += "K=" + fmt(r.x[i]) + ": " + fmt(s.values[i]) + " (" + std::to_string(s.trials[i]) + " frames); ";
        return {ok, detail};
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    Outcome determinism()
    {
        const auto dir = std::filesystem::temp_directory_path() / "rislink_acceptance";
        std::filesystem::create_directories(dir);
        const auto cfg = dir / "small.cfg";
        {
            std::ofstream f(cfg);
            f << "n_bs_antennas: 8\nn_users: 2\nn_ris_elements: 2x2\nsymbols_per_frame: 120\nblocks_per_frame: 4\n"
                 "max_trials: 1000\npdf_samples: 200000\nuplink_max_trials: 20000\noutput_snr_draws: 50\n";
        }
        const std::vector<std::string> runs = {
            "downlink-ber --sweep ebn0 --grid 2,6",
            "downlink-ber --sweep speed --grid 0,50 --seed 9",
            "uplink-ser --grid 0,8",
            "output-snr --grid 8,16",
            "pdf-fit --grid 0.1,0.01",
        };
        bool ok = true;
        std::string detail;
        int idx = 0;
        for (const std::string &args : runs)
        {
            std::string outputs[2];
            int w = 0;
            for (int workers : {1, 8})
            {
                const auto out = dir / ("run" + std::to_string(idx) + "_w" + std::to_string(workers) + ".csv");
                const std::string cmd = std::string("\"") + RISLINK_CLI_PATH + "\" " + args + " --config \"" + cfg.string() + "\" --workers " +
                                        std::to_string(workers) + " --out \"" + out.string() + "\"";
                if (std::system(cmd.c_str()) != 0)
                {
                    ok = false;
                    detail += "'" + args + "' exited non-zero; ";
                }
                outputs[w++] = slurp(out);
            }
            const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
            ok = ok && same;
            detail += args.substr(0, args.find(' ')) + (same ? " identical; " : " DIFFERS; ");
            ++idx;
        }
        std::filesystem::remove_all(dir);
        return {ok, detail};
    }

    struct Criterion
    {
        int id;
        const char *name;
        double budget_s;
        Outcome (*run)();
    };
}

int main()
{
    const Criterion criteria[] = {
        {1, "linear-model exactness", 10.0, linear_model_exactness},
        {2, "doppler invariance", 5.0, doppler_invariance},
        {3, "zf identity and roundtrip", 30.0, zf_identity},
        {4, "output-snr closed form", 120.0, output_snr},
        {5, "distribution stack", 120.0, distribution_stack},
        {6, "gaussian approximation", 60.0, gaussian_approximation},
        {7, "closed-form ser", 300.0, closed_form_ser},
        {8, "mobility robustness", 300.0, mobility_robustness},
        {9, "rician trend", 300.0, rician_trend},
        {10, "determinism", 60.0, determinism},
    };

    int failures = 0;
    for (const Criterion &c : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        while (o.detail.size() >= 2 && o.detail.compare(o.detail.size() - 2, 2, "; ") == 0)
            o.detail.resize(o.detail.size() - 2);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << "; " << fmt(secs) << " s of "
                  << fmt(c.budget_s) << " s" << (in_time ? "" : " OVER BUDGET") << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
