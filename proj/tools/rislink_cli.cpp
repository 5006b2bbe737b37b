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
#include "rislink/config.hpp"
#include "rislink/curve.hpp"
#include "rislink/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace rislink;

namespace
{
    struct Options
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::string sweep;
        std::string grid;
        std::string scheme = "all";
        std::string mode = "both";
        bool paper_scale = false;
        std::string out;
        int workers = 1;
    };

    ScenarioConfig scenario(const Options &o)
    {
        ScenarioConfig cfg = o.config.empty() ? parse_scenario("", "<defaults>") : load_scenario(o.config);
        if (o.seed)
        {
            cfg.seed = *o.seed;
            cfg.explicit_keys.insert("seed");
        }
        if (!o.paper_scale)
            apply_desk_scale(cfg);
        cfg.validate();
        return cfg;
    }

    std::vector<double> grid_or(const Options &o, std::vector<double> fallback)
    {
        return o.grid.empty() ? fallback : parse_number_list(o.grid, "--grid");
    }

    std::vector<Scheme> schemes(const Options &o, const ScenarioConfig &cfg)
    {
        if (o.scheme != "all")
            return {parse_scheme(o.scheme)};
        std::vector<Scheme> out{Scheme::linear_precoded};
        if (cfg.n_bs_antennas <= joint_max_antennas)
            out.push_back(Scheme::linear_joint);
        out.push_back(Scheme::qam_ml_baseline);
        return out;
    }

    void emit(const CurveResult &r, const Options &o)
    {
        if (o.out.empty() || o.out == "-")
            std::cout << format_csv(r);
        else
            export_csv(r, o.out);
    }

    // Subcommands other than downlink-ber have a single axis and scheme.
    void require_fixed(const Options &o, const std::string &axis, const std::string &scheme)
    {
        if (!o.sweep.empty() && o.sweep != axis)
            throw std::invalid_argument("--sweep must be '" + axis + "' for this subcommand");
        if (o.scheme != "all" && o.scheme != scheme)
            throw std::invalid_argument("--scheme must be '" + scheme + "' or 'all' for this subcommand");
    }

    void add_common(CLI::App *sub, Options &o)
    {
        sub->add_option("--config", o.config, "Scenario file (key: value per line)");
        sub->add_option("--seed", o.seed, "Master seed");
        sub->add_option("--grid", o.grid, "Comma-separated sweep values");
        sub->add_option("--sweep", o.sweep, "Sweep axis");
        sub->add_option("--scheme", o.scheme, "Transmission scheme");
        sub->add_flag("--paper-scale", o.paper_scale, "Use N_t=128, N_k=8, 8x8 RIS instead of the desk-scale defaults");
        sub->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
        sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Link-level simulator for RIS-aided links with complementary on-off signalling"};
    app.require_subcommand(1);
    Options o;

    auto *ber = app.add_subcommand("downlink-ber", "Downlink BER sweep");
    add_common(ber, o);

    auto *ser = app.add_subcommand("uplink-ser", "Uplink SER against Eb/N0");
    add_common(ser, o);
    ser->add_option("--mode", o.mode, "monte_carlo | closed_form | both");

    auto *snr = app.add_subcommand("output-snr", "Precoded output SNR against N_t");
    add_common(snr, o);

    auto *pdf = app.add_subcommand("pdf-fit", "Histogram, series density and Gaussian approximation of z");
    add_common(pdf, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        const ScenarioConfig cfg = scenario(o);
        if (ber->parsed())
        {
            const SweepAxis axis = parse_sweep(o.sweep.empty() ? "speed" : o.sweep);
            std::vector<double> fallback;
            switch (axis)
            {
            case SweepAxis::speed:
                fallback = {10.0, 20.0, 30.0, 40.0, 50.0};
                break;
            case SweepAxis::ebn0:
                fallback = cfg.ebn0_grid;
                break;
            case SweepAxis::rician_k:
                fallback = {1.0, 10.0, 100.0};
                break;
            }
            emit(run_downlink_ber(cfg, schemes(o, cfg), axis, grid_or(o, fallback), o.workers), o);
        }
        else if (ser->parsed())
        {
            require_fixed(o, "ebn0", "linear_uplink");
            emit(run_uplink_ser(cfg, parse_uplink_mode(o.mode), grid_or(o, cfg.ebn0_grid), o.workers), o);
        }
        else if (snr->parsed())
        {
            require_fixed(o, "n_bs_antennas", "linear_precoded");
            emit(run_output_snr(cfg, grid_or(o, {32.0, 64.0, 128.0}), o.workers), o);
        }
        else if (pdf->parsed())
        {
            require_fixed(o, "sigma_v2", "linear_uplink");
            emit(run_pdf_fit(cfg, grid_or(o, {0.1, 0.01, 0.001}), o.workers).curve, o);
        }
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    catch (const NumericalError &e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
