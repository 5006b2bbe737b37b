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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rislink
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return "";
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        std::string lower(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return s;
        }

        double to_double(const std::string &text, const std::string &what)
        {
            const std::string t = trim(text);
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(t, &used);
            }
            catch (const std::exception &)
            {
                throw ConfigError(what + ": expected a number, got '" + t + "'");
            }
            if (used != t.size() || !std::isfinite(v))
                throw ConfigError(what + ": expected a finite number, got '" + t + "'");
            return v;
        }

        long long to_integer(const std::string &text, const std::string &what)
        {
            const double v = to_double(text, what);
            if (v != std::floor(v) || std::abs(v) > 9.0e15)
                throw ConfigError(what + ": expected an integer, got '" + trim(text) + "'");
            return static_cast<long long>(v);
        }

        std::uint64_t to_u64(const std::string &text, const std::string &what)
        {
            const std::string t = trim(text);
            if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
                throw ConfigError(what + ": expected a non-negative integer, got '" + t + "'");
            try
            {
                return std::stoull(t);
            }
            catch (const std::exception &)
            {
                throw ConfigError(what + ": value out of range '" + t + "'");
            }
        }

        bool to_bool(const std::string &text, const std::string &what)
        {
            const std::string t = lower(trim(text));
            if (t == "true" || t == "1" || t == "yes" || t == "on")
                return true;
            if (t == "false" || t == "0" || t == "no" || t == "off")
                return false;
            throw ConfigError(what + ": expected true or false, got '" + t + "'");
        }

        std::array<double, 3> to_triple(const std::string &text, const std::string &what)
        {
            std::string t = trim(text);
            if (!t.empty() && (t.front() == '(' || t.front() == '['))
                t = t.substr(1);
            if (!t.empty() && (t.back() == ')' || t.back() == ']'))
                t.pop_back();
            const auto v = parse_number_list(t, what);
            if (v.size() != 3)
                throw ConfigError(what + ": expected three comma-separated numbers");
            return {v[0], v[1], v[2]};
        }

        // "64" (square) or "8x8"
        std::pair<int, int> to_ris_shape(const std::string &text, const std::string &what)
        {
            const std::string t = lower(trim(text));
            const auto x = t.find('x');
            if (x != std::string::npos)
            {
                const auto nx = to_integer(t.substr(0, x), what);
                const auto ny = to_integer(t.substr(x + 1), what);
                if (nx < 1 || ny < 1)
                    throw ConfigError(what + ": RIS dimensions must be at least 1");
                return {static_cast<int>(nx), static_cast<int>(ny)};
            }
            const auto n = to_integer(t, what);
            if (n < 1)
                throw ConfigError(what + ": must be at least 1");
            const auto side = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
            if (side * side == n)
                return {static_cast<int>(side), static_cast<int>(side)};
            return {static_cast<int>(n), 1};
        }

        PhaseMode to_phase_mode(const std::string &text, const std::string &what)
        {
            const std::string t = lower(trim(text));
            if (t == "aligned")
                return PhaseMode::aligned;
            if (t == "fixed")
                return PhaseMode::fixed;
            if (t == "random")
                return PhaseMode::random;
            throw ConfigError(what + ": expected aligned, fixed or random, got '" + t + "'");
        }

        using Setter = std::function<void(ScenarioConfig &, const std::string &, const std::string &)>;

        const std::map<std::string, Setter> &setters()
        {
            static const std::map<std::string, Setter> table = {
                {"bs_position", [](auto &c, auto &v, auto &w) { c.bs_position = to_triple(v, w); }},
                {"ris_position", [](auto &c, auto &v, auto &w) { c.ris_position = to_triple(v, w); }},
                {"user_lane_y", [](auto &c, auto &v, auto &w) { c.user_lane_y = to_double(v, w); }},
                {"user_height", [](auto &c, auto &v, auto &w) { c.user_height = to_double(v, w); }},
                {"coverage_length", [](auto &c, auto &v, auto &w) { c.coverage_length = to_double(v, w); }},
                {"n_users", [](auto &c, auto &v, auto &w) { c.n_users = static_cast<int>(to_integer(v, w)); }},
                {"n_ris_elements", [](auto &c, auto &v, auto &w) { std::tie(c.ris_nx, c.ris_ny) = to_ris_shape(v, w); }},
                {"n_bs_antennas", [](auto &c, auto &v, auto &w) { c.n_bs_antennas = static_cast<int>(to_integer(v, w)); }},
                {"rician_factor", [](auto &c, auto &v, auto &w) { c.rician_K = c.rician_V = to_double(v, w); }},
                {"rician_K", [](auto &c, auto &v, auto &w) { c.rician_K = to_double(v, w); }},
                {"rician_V", [](auto &c, auto &v, auto &w) { c.rician_V = to_double(v, w); }},
                {"pathloss_exponents", [](auto &c, auto &v, auto &w) { c.pathloss_exponents = to_triple(v, w); }},
                {"direct_link", [](auto &c, auto &v, auto &w) { c.direct_link = to_bool(v, w); }},
                {"carrier_f1", [](auto &c, auto &v, auto &w) { c.carrier_f1 = to_double(v, w); }},
                {"symbol_period", [](auto &c, auto &v, auto &w) { c.symbol_period = to_double(v, w); }},
                {"speed", [](auto &c, auto &v, auto &w) { c.speed = to_double(v, w); }},
                {"blocks_per_frame", [](auto &c, auto &v, auto &w) { c.blocks_per_frame = static_cast<int>(to_integer(v, w)); }},
                {"symbols_per_frame", [](auto &c, auto &v, auto &w) { c.symbols_per_frame = static_cast<int>(to_integer(v, w)); }},
                {"pilot_length", [](auto &c, auto &v, auto &w) { c.pilot_length = static_cast<int>(to_integer(v, w)); }},
                {"noise_sigma2", [](auto &c, auto &v, auto &w) { c.noise_sigma2 = to_double(v, w); }},
                {"ebn0_db", [](auto &c, auto &v, auto &w) { c.ebn0_db = to_double(v, w); }},
                {"ebn0_grid", [](auto &c, auto &v, auto &w) { c.ebn0_grid = parse_number_list(v, w); }},
                {"seed", [](auto &c, auto &v, auto &w) { c.seed = to_u64(v, w); }},
                {"ris_phase_mode", [](auto &c, auto &v, auto &w) { c.ris_phase_mode = to_phase_mode(v, w); }},
                {"min_trials", [](auto &c, auto &v, auto &w) { c.min_trials = to_u64(v, w); }},
                {"max_trials", [](auto &c, auto &v, auto &w) { c.max_trials = to_u64(v, w); }},
                {"target_errors", [](auto &c, auto &v, auto &w) { c.target_errors = to_u64(v, w); }},
                {"batch_size", [](auto &c, auto &v, auto &w) { c.batch_size = to_u64(v, w); }},
                {"uplink_max_trials", [](auto &c, auto &v, auto &w) { c.uplink_max_trials = to_u64(v, w); }},
                {"uplink_target_errors", [](auto &c, auto &v, auto &w) { c.uplink_target_errors = to_u64(v, w); }},
                {"pdf_gamma", [](auto &c, auto &v, auto &w) { c.pdf_gamma = to_double(v, w); }},
                {"pdf_gamma_prime", [](auto &c, auto &v, auto &w) { c.pdf_gamma_prime = to_double(v, w); }},
                {"pdf_samples", [](auto &c, auto &v, auto &w) { c.pdf_samples = to_u64(v, w); }},
                {"output_snr_channel", [](auto &c, auto &v, auto &) { c.output_snr_channel = lower(trim(v)); }},
                {"output_snr_draws", [](auto &c, auto &v, auto &w) { c.output_snr_draws = static_cast<int>(to_integer(v, w)); }},
                {"output_snr_symbols", [](auto &c, auto &v, auto &w) { c.output_snr_symbols = static_cast<int>(to_integer(v, w)); }},
            };
            return table;
        }

        void require(bool ok, const std::string &key, const std::string &msg)
        {
            if (!ok)
                throw ConfigError("invalid value for '" + key + "': " + msg);
        }
    }

    std::vector<double> parse_number_list(const std::string &text, const std::string &what)
    {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            if (trim(item).empty())
                throw ConfigError(what + ": empty list entry");
            out.push_back(to_double(item, what));
        }
        return out;
    }

    void ScenarioConfig::validate() const
    {
        require(n_users >= 1, "n_users", "must be at least 1");
        require(ris_nx >= 1 && ris_ny >= 1, "n_ris_elements", "must be at least 1");
        require(n_bs_antennas >= 1, "n_bs_antennas", "must be at least 1");
        require(rician_K >= 0.0, "rician_K", "must be non-negative");
        require(rician_V >= 0.0, "rician_V", "must be non-negative");
        require(coverage_length >= 0.0, "coverage_length", "must be non-negative");
        for (double e : pathloss_exponents)
            require(e >= 0.0, "pathloss_exponents", "must be non-negative");
        require(carrier_f1 > 0.0, "carrier_f1", "must be positive");
        require(symbol_period > 0.0, "symbol_period", "must be positive");
        require(speed >= 0.0, "speed", "must be non-negative");
        require(blocks_per_frame >= 1, "blocks_per_frame", "must be at least 1");
        require(symbols_per_frame >= 1, "symbols_per_frame", "must be at least 1");
        require(pilot_length >= 1, "pilot_length", "must be at least 1");
        require(!noise_sigma2 || *noise_sigma2 >= 0.0, "noise_sigma2", "must be non-negative");
        require(!ebn0_grid.empty(), "ebn0_grid", "must not be empty");
        for (std::size_t i = 1; i < ebn0_grid.size(); ++i)
            require(ebn0_grid[i] > ebn0_grid[i - 1], "ebn0_grid", "must be strictly increasing");
        require(min_trials >= 1000, "min_trials", "must be at least 1000");
        require(max_trials >= min_trials, "max_trials", "must be at least min_trials");
        require(batch_size >= 1, "batch_size", "must be at least 1");
        require(uplink_max_trials >= min_trials, "uplink_max_trials", "must be at least min_trials");
        require(pdf_gamma >= 0.0, "pdf_gamma", "must be non-negative");
        require(pdf_gamma_prime >= 0.0, "pdf_gamma_prime", "must be non-negative");
        require(pdf_samples >= 1, "pdf_samples", "must be at least 1");
        require(output_snr_channel == "iid" || output_snr_channel == "cascade", "output_snr_channel", "expected iid or cascade");
        require(output_snr_draws >= 1, "output_snr_draws", "must be at least 1");
        require(output_snr_symbols >= 1, "output_snr_symbols", "must be at least 1");
    }

    ScenarioConfig parse_scenario(const std::string &text, const std::string &origin)
    {
        ScenarioConfig cfg;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;

            const std::string where = origin + ":" + std::to_string(line_no);
            const auto colon = line.find(':');
            if (colon == std::string::npos)
                throw ConfigError(where + ": expected 'key: value'");
            const std::string key = trim(line.substr(0, colon));
            const std::string value = trim(line.substr(colon + 1));
            const auto it = setters().find(key);
            if (it == setters().end())
                throw ConfigError(where + ": unknown key '" + key + "'");
            if (value.empty())
                throw ConfigError(where + ": key '" + key + "' has no value");
            it->second(cfg, value, where + ": " + key);
            cfg.explicit_keys.insert(key);
            if (key == "rician_factor")
            {
                cfg.explicit_keys.insert("rician_K");
                cfg.explicit_keys.insert("rician_V");
            }
        }
        cfg.validate();
        return cfg;
    }

    ScenarioConfig load_scenario(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream buf;
        buf << f.rdbuf();
        return parse_scenario(buf.str(), path);
    }

    void apply_desk_scale(ScenarioConfig &cfg)
    {
        if (!cfg.has("n_bs_antennas"))
            cfg.n_bs_antennas = 32;
        if (!cfg.has("n_users"))
            cfg.n_users = 4;
        if (!cfg.has("n_ris_elements"))
            cfg.ris_nx = cfg.ris_ny = 4;
        cfg.validate();
    }

    ChannelGeometry make_geometry(const ScenarioConfig &cfg, RngStream &geometry_rng)
    {
        auto distance = [](const std::array<double, 3> &a, const std::array<double, 3> &b)
        { return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]); };

        ChannelGeometry g;
        g.n_bs = cfg.n_bs_antennas;
        g.ris_nx = cfg.ris_nx;
        g.ris_ny = cfg.ris_ny;
        g.n_users = cfg.n_users;
        g.wavelength = cfg.wavelength();
        g.bs_ris_factor = cfg.rician_K;
        g.ris_user_factor = cfg.rician_V;
        g.bs_user_factor = cfg.rician_K;
        g.direct_link = cfg.direct_link;
        g.max_doppler = cfg.max_doppler();
        g.phase_mode = cfg.ris_phase_mode;
        g.bs_ris_gain = path_gain(distance(cfg.bs_position, cfg.ris_position), cfg.pathloss_exponents[1]);

        const double half = 0.5 * cfg.coverage_length;
        const double center = cfg.ris_position[0];
        for (int k = 0; k < cfg.n_users; ++k)
        {
            const double x = geometry_rng.uniform(center - half, center + half);
            const std::array<double, 3> user{x, cfg.user_lane_y, cfg.user_height};
            g.ris_user_gain.push_back(path_gain(distance(cfg.ris_position, user), cfg.pathloss_exponents[2]));
            g.bs_user_gain.push_back(path_gain(distance(cfg.bs_position, user), cfg.pathloss_exponents[0]));
        }
        return g;
    }

    std::string phase_mode_name(PhaseMode mode)
    {
        switch (mode)
        {
        case PhaseMode::aligned:
            return "aligned";
        case PhaseMode::fixed:
            return "fixed";
        case PhaseMode::random:
            return "random";
        }
        return "aligned";
    }
}
