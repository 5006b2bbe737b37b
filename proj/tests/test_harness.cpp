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

#include "rislink/config.hpp"
#include "rislink/curve.hpp"
#include "rislink/experiments.hpp"
#include "rislink/montecarlo.hpp"
#include "rislink/stats.hpp"

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>

using namespace rislink;

namespace
{
    ScenarioConfig small(const std::string &extra = "")
    {
        ScenarioConfig cfg = parse_scenario("n_bs_antennas: 8\nn_users: 2\nn_ris_elements: 2x2\n"
                                            "symbols_per_frame: 120\nblocks_per_frame: 4\n"
                                            "min_trials: 1000\nmax_trials: 1000\n" +
                                            extra);
        return cfg;
    }

    std::string messages_of(const std::function<void()> &fn)
    {
        try
        {
            fn();
        }
        catch (const std::exception &e)
        {
            return e.what();
        }
        return "";
    }
}

TEST_SUITE("harness")
{
    TEST_CASE("scenario defaults and diagnostics")
    {
        const ScenarioConfig d = parse_scenario("");
        CHECK(d.n_users == 8);
        CHECK(d.n_ris() == 64);
        CHECK(d.n_bs_antennas == 128);
        CHECK(d.rician_K == 10.0);
        CHECK(d.rician_V == 10.0);
        CHECK(d.speed == 50.0);
        CHECK(d.carrier_f1 == 5.9e9);
        CHECK(d.symbol_period == 8e-6);
        CHECK(d.f2() == doctest::Approx(5.9e9 + 125000.0));
        CHECK(d.max_doppler() == doctest::Approx(50.0 * 5.9e9 / 3e8));
        CHECK(d.blocks_per_frame == 40);
        CHECK(d.symbols_per_frame == 1020);
        CHECK(d.pilot_length == 20);

        CHECK(parse_scenario("speed: 0").max_doppler() == 0.0);

        const std::string zero = messages_of([] { parse_scenario("n_bs_antennas: 0", "a.cfg"); });
        CHECK(zero.find("n_bs_antennas") != std::string::npos);

        const std::string unknown = messages_of([] { parse_scenario("# comment\n\nspeed: 3\nbogus: 1\n", "b.cfg"); });
        CHECK(unknown.find("b.cfg:4") != std::string::npos);
        CHECK(unknown.find("bogus") != std::string::npos);

        CHECK_THROWS_AS(parse_scenario("speed = 3"), ConfigError);
        CHECK_THROWS_AS(parse_scenario("speed: fast"), ConfigError);
        CHECK_THROWS_AS(parse_scenario("ebn0_grid: 0, 4, 2"), ConfigError);
        CHECK_THROWS_AS(parse_scenario("min_trials: 10"), ConfigError);
        CHECK_THROWS_AS(parse_scenario("ris_phase_mode: clever"), ConfigError);
        CHECK_THROWS_AS(load_scenario("/nonexistent/dir/x.cfg"), ConfigError);

        const ScenarioConfig k = parse_scenario("rician_factor: 3 # both links\nris_phase_mode: random\nn_ris_elements: 16");
        CHECK(k.rician_K == 3.0);
        CHECK(k.rician_V == 3.0);
        CHECK(k.ris_nx == 4);
        CHECK(k.ris_phase_mode == PhaseMode::random);

        CHECK(parse_number_list("1, 2.5,-3", "grid") == std::vector<double>{1.0, 2.5, -3.0});
        CHECK_THROWS_AS(parse_number_list("1,,2", "grid"), ConfigError);
    }

    TEST_CASE("desk scale only fills keys the user did not set")
    {
        ScenarioConfig a = parse_scenario("");
        apply_desk_scale(a);
        CHECK(a.n_bs_antennas == 32);
        CHECK(a.n_users == 4);
        CHECK(a.n_ris() == 16);

        ScenarioConfig b = parse_scenario("n_bs_antennas: 64");
        apply_desk_scale(b);
        CHECK(b.n_bs_antennas == 64);
        CHECK(b.n_users == 4);
    }

    TEST_CASE("config files load with their path in diagnostics")
    {
        const auto path = std::filesystem::temp_directory_path() / "rislink_cfg_test.cfg";
        {
            std::ofstream f(path);
            f << "speed: 10\nseed: 99\n";
        }
        const ScenarioConfig c = load_scenario(path.string());
        CHECK(c.speed == 10.0);
        CHECK(c.seed == 99);
        {
            std::ofstream f(path);
            f << "speed: -1\n";
        }
        CHECK(messages_of([&] { load_scenario(path.string()); }).find("speed") != std::string::npos);
        std::filesystem::remove(path);
    }

    TEST_CASE("monte carlo engine: stopping rule and worker independence")
    {
        auto trial = [](std::uint64_t i)
        {
            RngStream r(7, {i});
            Tally t{0, 10, 1};
            for (int k = 0; k < 10; ++k)
                t.errors += r.uniform() < 0.02;
            return t;
        };
        McControl ctl;
        ctl.min_trials = 100;
        ctl.max_trials = 5000;
        ctl.target_errors = 50;
        ctl.batch_size = 16;
        ctl.workers = 1;
        const Tally one = run_monte_carlo(ctl, trial);
        CHECK(one.trials >= 100);
        CHECK(one.errors >= 50);
        CHECK(one.trials % 16 == 0);
        for (int w : {2, 3, 8})
        {
            ctl.workers = w;
            const Tally t = run_monte_carlo(ctl, trial);
            CHECK(t.trials == one.trials);
            CHECK(t.errors == one.errors);
            CHECK(t.observations == one.observations);
        }

        ctl.target_errors = 1000000;
        ctl.max_trials = 200;
        CHECK(run_monte_carlo(ctl, trial).trials == 200);

        ctl.target_errors = 0;
        CHECK(run_monte_carlo(ctl, trial).trials == 112);

        ctl.workers = 4;
        ctl.max_trials = 1000;
        auto failing = [](std::uint64_t i) -> Tally
        {
            if (i == 37 || i == 90)
                throw std::runtime_error("trial " + std::to_string(i));
            return {0, 1, 1};
        };
        CHECK(messages_of([&] { run_monte_carlo(ctl, failing); }) == "trial 37");

        const Tally t{25, 1000, 1};
        CHECK(t.rate() == 0.025);
        CHECK(t.ci95() == doctest::Approx(1.96 * std::sqrt(0.025 * 0.975 / 1000)));
        CHECK(Tally{}.rate() == 0.0);

        std::vector<std::atomic<int>> hits(1000);
        parallel_for(1000, 8, [&](std::uint64_t i) { hits[i]++; });
        bool all_once = true;
        for (auto &h : hits)
            all_once = all_once && h == 1;
        CHECK(all_once);
    }

    TEST_CASE("goodness of fit helpers")
    {
        std::vector<double> u;
        for (int i = 0; i < 1000; ++i)
            u.push_back((i + 0.5) / 1000.0);
        CHECK(ks_distance(u, [](double x) { return std::clamp(x, 0.0, 1.0); }) == doctest::Approx(0.0005));

        const TabulatedCdf tri([](double x) { return std::max(0.0, 1.0 - std::abs(x - 1.0)); }, -1.0, 3.0, 4000);
        CHECK(tri.total() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(tri(0.5) == doctest::Approx(0.125).epsilon(1e-5));
        CHECK(tri(-5.0) == 0.0);
        CHECK(tri(5.0) == doctest::Approx(1.0).epsilon(1e-6));

        RngStream rng(3);
        std::vector<double> s(20000);
        for (double &x : s)
            x = rng.uniform();
        std::sort(s.begin(), s.end());
        const auto fit = chi_square_gof(s, linspace(0.05, 0.95, 18), [](double x) { return std::clamp(x, 0.0, 1.0); });
        CHECK(fit.p_value > 0.001);
        const auto miss = chi_square_gof(s, linspace(0.05, 0.95, 18), [](double x) { return std::clamp(x * x, 0.0, 1.0); });
        CHECK(miss.p_value < 1e-10);

        const auto grid = linspace(0.0, 2.0, 4);
        CHECK(grid == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
        CHECK(trapezoid(grid, {1.0, 2.0, 3.0, 4.0, 5.0}) == doctest::Approx(6.0));
    }

    TEST_CASE("csv export: header, empty grid, parse-back, determinism, io errors")
    {
        CurveResult empty;
        empty.x_name = "speed_mps";
        empty.series.push_back({"ber_a", {}, {}, {}});
        CHECK(format_csv(empty) == "speed_mps,ber_a,ber_a_trials,ber_a_ci95\n");

        CurveResult r;
        r.x_name = "ebn0_db";
        r.x = {0.0, 2.0, 4.5};
        r.comments = {"mapping: sigma2 = rho / ebn0"};
        Series a{"ber_x", {}, {}, {}}, b{"ber_y", {}, {}, {}};
        a.push(0.125, 1000, 0.01);
        a.push(1.0 / 3.0, 2000, 1e-5);
        a.push(0.0, 4000, 0.0);
        b.push(std::nan(""), 0, 0.0);
        b.push(2.5e-7, 123456789, 3e-9);
        b.push(1.0, 1, 0.0);
        r.series = {a, b};
        const std::string text = format_csv(r);
        CHECK(text.rfind("# mapping: sigma2 = rho / ebn0\n", 0) == 0);
        CHECK(text.find("3.33333333e-01") != std::string::npos);

        const CurveResult back = parse_csv(text);
        CHECK(back.x_name == r.x_name);
        CHECK(back.comments == r.comments);
        REQUIRE(back.series.size() == 2);
        CHECK(back.x == r.x);
        CHECK(back.series[0].trials == a.trials);
        CHECK(back.series[1].trials == b.trials);
        for (std::size_t i = 0; i < 3; ++i)
        {
            CHECK(back.series[0].values[i] == doctest::Approx(a.values[i]).epsilon(1e-8));
            CHECK(back.series[0].ci95[i] == doctest::Approx(a.ci95[i]).epsilon(1e-8));
        }
        CHECK(std::isnan(back.series[1].values[0]));
        CHECK(format_csv(back) == text);

        const auto path = std::filesystem::temp_directory_path() / "rislink_curve_test.csv";
        export_csv(r, path.string());
        CHECK(format_csv(read_csv(path.string())) == text);
        std::filesystem::remove(path);
        CHECK_THROWS_AS(export_csv(r, "/nonexistent/dir/out.csv"), IoError);
        CHECK_THROWS_AS(read_csv("/nonexistent/dir/out.csv"), IoError);

        CurveResult bad = r;
        bad.series[0].values.pop_back();
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        CHECK_THROWS_AS(parse_csv("x,a,a_trials\n"), std::invalid_argument);
    }

    TEST_CASE("frame layout")
    {
        const ScenarioConfig cfg = parse_scenario("n_bs_antennas: 32");
        const FrameLayout f = frame_layout(cfg);
        CHECK(f.symbols == 1020);
        CHECK(f.blocks == 40);
        CHECK(f.pilots == 32);
        for (int b = 0; b < f.blocks; ++b)
        {
            CHECK(f.block_of(f.block_start(b)) == b);
            if (b > 0)
                CHECK(f.block_of(f.block_start(b) - 1) == b - 1);
        }
        CHECK(f.block_of(1019) == 39);
        CHECK(frame_layout(parse_scenario("")).pilots == 128);
    }

    TEST_CASE("4-QAM decisions flip under a half-turn")
    {
        for (int b0 : {0, 1})
            for (int b1 : {0, 1})
            {
                const cplx q = qam4_map(b0, b1);
                CHECK(std::abs(q) == doctest::Approx(1.0));
                CHECK(qam4_decide(q) == std::pair<int, int>{b0, b1});
                CHECK(qam4_decide(std::polar(1.0, pi) * q) == std::pair<int, int>{1 - b0, 1 - b1});
            }
    }

    TEST_CASE("noiseless downlink frames are error free")
    {
        const ScenarioConfig moving = small("noise_sigma2: 0\nspeed: 50\n");
        const CurveResult lin = run_downlink_ber(moving, {Scheme::linear_precoded, Scheme::linear_joint}, SweepAxis::speed, {0.0, 50.0});
        for (const Series &s : lin.series)
            for (double v : s.values)
                CHECK(v == 0.0);
        for (const Series &s : lin.series)
            for (auto n : s.trials)
                CHECK(n >= 1000);

        const CurveResult base = run_downlink_ber(small("noise_sigma2: 0\n"), {Scheme::qam_ml_baseline}, SweepAxis::speed, {0.0});
        CHECK(base.series[0].values[0] == 0.0);
    }

    TEST_CASE("downlink sweeps are deterministic and share channel draws")
    {
        const ScenarioConfig cfg = small();
        const std::vector<Scheme> all{Scheme::linear_precoded, Scheme::linear_joint, Scheme::qam_ml_baseline};
        const std::string one = format_csv(run_downlink_ber(cfg, all, SweepAxis::ebn0, {4.0, 8.0}, 1));
        CHECK(one == format_csv(run_downlink_ber(cfg, all, SweepAxis::ebn0, {4.0, 8.0}, 4)));
        CHECK(one.find("# ebn0 mapping") != std::string::npos);

        const Tally a = simulate_frame(cfg, Scheme::qam_ml_baseline, 6.0, 17);
        const Tally b = simulate_frame(cfg, Scheme::qam_ml_baseline, 6.0, 17);
        CHECK(a.errors == b.errors);
        CHECK(a.observations == b.observations);

        ScenarioConfig big = cfg;
        big.n_bs_antennas = 17;
        CHECK_THROWS_AS(simulate_frame(big, Scheme::linear_joint, 6.0, 0), SearchTooLargeError);
        CHECK_THROWS_AS(run_downlink_ber(big, {Scheme::linear_joint}, SweepAxis::ebn0, {4.0}), SearchTooLargeError);
        CHECK_THROWS_AS(run_downlink_ber(cfg, {Scheme::linear_precoded}, SweepAxis::ebn0, {4.0, 4.0}), ConfigError);
    }

    TEST_CASE("output SNR sweep tracks the closed form")
    {
        ScenarioConfig cfg = parse_scenario("n_users: 8\noutput_snr_draws: 50\noutput_snr_symbols: 100");
        const CurveResult r = run_output_snr(cfg, {17.0, 25.0, 64.0});
        const Series &eq = r.find("closed_form_snr_db");
        const Series &sim = r.find("sim_snr_db");
        CHECK(eq.values[1] - eq.values[0] == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-12));
        for (std::size_t i = 0; i < r.x.size(); ++i)
            CHECK(std::abs(sim.values[i] - eq.values[i]) < 1.0);
        CHECK_THROWS_AS(run_output_snr(cfg, {9.0}), ConfigError);
        CHECK_THROWS_AS(run_output_snr(cfg, {20.5}), ConfigError);

        cfg.noise_sigma2 = 0.1;
        const CurveResult hi = run_output_snr(cfg, {64.0});
        CHECK(hi.find("closed_form_snr_db").values[0] == doctest::Approx(r.find("closed_form_snr_db").values[2] - 10.0));
    }

    TEST_CASE("uplink SER vanishes without noise")
    {
        const ScenarioConfig cfg = parse_scenario("n_users: 3\nn_bs_antennas: 16\nn_ris_elements: 3x3\nnoise_sigma2: 0\n");
        const CurveResult r = run_uplink_ser(cfg, UplinkMode::both, {10.0});
        CHECK(r.find("ser_monte_carlo").values[0] == 0.0);
        CHECK(r.find("ser_closed_form").values[0] == 0.0);
        CHECK(r.find("ser_monte_carlo").trials[0] >= 1000);

        const CurveResult cf = run_uplink_ser(cfg, UplinkMode::closed_form, {10.0});
        REQUIRE(cf.series.size() == 1);
        CHECK(cf.series[0].name == "ser_closed_form");
    }

    TEST_CASE("pdf fit: areas, gaussian agreement at high SNR, series advantage at low SNR")
    {
        const ScenarioConfig cfg = parse_scenario("pdf_samples: 1000000");
        const PdfFitResult r = run_pdf_fit(cfg, {0.1, 0.01, 0.001});
        REQUIRE(r.points.size() == 3);
        for (const PdfFitPoint &p : r.points)
        {
            CHECK(p.area_histogram == doctest::Approx(1.0).epsilon(1e-3));
            CHECK(p.area_series == doctest::Approx(1.0).epsilon(1e-3));
            CHECK(p.area_gaussian == doctest::Approx(1.0).epsilon(1e-3));
        }
        CHECK(r.points[2].ks_gaussian < 0.02);
        CHECK(r.points[0].ks_series <= r.points[0].ks_gaussian);
        CHECK(r.curve.x.size() == 321);
        CHECK(r.curve.series.size() == 9);

        const auto a = sample_z(1.0, 0.5, 0.01, 200000, 5, 2, 1);
        const auto b = sample_z(1.0, 0.5, 0.01, 200000, 5, 2, 8);
        CHECK(a == b);
        CHECK_THROWS_AS(run_pdf_fit(cfg, {0.0}), ConfigError);
    }
}
