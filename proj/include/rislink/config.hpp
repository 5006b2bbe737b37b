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

#ifndef RISLINK_CONFIG_HPP
#define RISLINK_CONFIG_HPP

#include "rislink/channel.hpp"
#include "rislink/common.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rislink
{
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    struct ScenarioConfig
    {
        std::array<double, 3> bs_position{20.0, -15.0, 25.0};
        std::array<double, 3> ris_position{-5.0, 45.0, 10.0};
        double user_lane_y = 35.0;
        double user_height = 1.5;
        double coverage_length = 100.0;

        int n_users = 8;
        int ris_nx = 8;
        int ris_ny = 8;
        int n_bs_antennas = 128;

        double rician_K = 10.0; // BS-RIS link
        double rician_V = 10.0; // RIS-user link

        // bs_user, bs_ris, ris_user
        std::array<double, 3> pathloss_exponents{2.5, 2.3, 2.1};
        bool direct_link = false;

        double carrier_f1 = 5.9e9;
        double symbol_period = 8e-6;
        double speed = 50.0;

        int blocks_per_frame = 40;
        int symbols_per_frame = 1020;
        int pilot_length = 20;

        std::optional<double> noise_sigma2;
        double ebn0_db = 10.0;
        std::vector<double> ebn0_grid{0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0};

        std::uint64_t seed = 1;
        PhaseMode ris_phase_mode = PhaseMode::aligned;

        std::uint64_t min_trials = 1000;
        std::uint64_t max_trials = 4000;
        std::uint64_t target_errors = 100;
        std::uint64_t batch_size = 50;

        // uplink trials are single symbols
        std::uint64_t uplink_max_trials = 1000000;
        std::uint64_t uplink_target_errors = 1000;

        // pdf-fit construction: |c s|^2 and |c s_bar|^2
        double pdf_gamma = 1.0;
        double pdf_gamma_prime = 0.0;
        std::uint64_t pdf_samples = 1000000;

        // output-snr: "iid" or "cascade"
        std::string output_snr_channel = "iid";
        int output_snr_draws = 200;
        int output_snr_symbols = 200;

        std::set<std::string> explicit_keys;

        int n_ris() const { return ris_nx * ris_ny; }
        double f2() const { return carrier_f1 + 1.0 / symbol_period; }
        double max_doppler() const { return speed * carrier_f1 / speed_of_light; }
        double wavelength() const { return speed_of_light / carrier_f1; }
        bool has(const std::string &key) const { return explicit_keys.count(key) != 0; }

        void validate() const;
    };

    ScenarioConfig parse_scenario(const std::string &text, const std::string &origin = "<string>");
    ScenarioConfig load_scenario(const std::string &path);

    // N_t = 32, N_k = 4, N = 4x4 for keys the user did not set.
    void apply_desk_scale(ScenarioConfig &cfg);

    // Comma-separated numbers; throws ConfigError naming `what` on failure.
    std::vector<double> parse_number_list(const std::string &text, const std::string &what);

    /// Channel geometry for one trial: users placed uniformly along the lane.
    ChannelGeometry make_geometry(const ScenarioConfig &cfg, RngStream &geometry_rng);

    std::string phase_mode_name(PhaseMode mode);
}

#endif
