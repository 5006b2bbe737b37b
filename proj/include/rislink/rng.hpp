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

#ifndef RISLINK_RNG_HPP
#define RISLINK_RNG_HPP

#include "rislink/common.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rislink
{
    // Stream labels so that channel draws and noise draws of one trial never share state.
    enum class StreamTag : std::uint64_t
    {
        geometry = 1,
        channel = 2,
        noise = 3,
        pilots = 4,
        symbols = 5,
    };

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    /// Seeded random stream. Every Monte Carlo trial derives its own stream from
    /// (master seed, trial index, tag), so results do not depend on scheduling.
    class RngStream
    {
    public:
        explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

        RngStream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
            : engine_(derive(master, path)) {}

        double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
        double normal() { return normal_(engine_); }
        std::uint64_t bits() { return engine_(); }
        int bit() { return static_cast<int>(engine_() >> 63); }

        /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
        cplx complex_normal(double variance = 1.0)
        {
            const double s = std::sqrt(0.5 * variance);
            const double re = normal_(engine_);
            const double im = normal_(engine_);
            return {s * re, s * im};
        }

        CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0)
        {
            CMatrix m(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r)
                    m(r, c) = complex_normal(variance);
            return m;
        }

        std::mt19937_64 &engine() { return engine_; }

    private:
        static std::uint64_t derive(std::uint64_t master, std::initializer_list<std::uint64_t> path)
        {
            std::uint64_t h = splitmix64(master);
            for (auto p : path)
                h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
            return h;
        }

        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };
}

#endif
