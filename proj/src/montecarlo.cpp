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

#include "rislink/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rislink
{
    double Tally::rate() const
    {
        return observations == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(observations);
    }

    double Tally::ci95() const
    {
        if (observations == 0)
            return 0.0;
        const double p = rate();
        return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(observations));
    }

    void McControl::validate() const
    {
        if (min_trials < 1 || max_trials < min_trials)
            throw std::invalid_argument("Trial limits must satisfy 1 <= min_trials <= max_trials.");
        if (batch_size < 1)
            throw std::invalid_argument("Batch size must be at least 1.");
        if (workers < 1)
            throw std::invalid_argument("Worker count must be at least 1.");
    }

    void parallel_for(std::uint64_t count, int workers, const std::function<void(std::uint64_t)> &fn)
    {
        if (workers < 1)
            throw std::invalid_argument("Worker count must be at least 1.");
        std::vector<std::exception_ptr> errors(count);
        auto body = [&](std::atomic<std::uint64_t> &next)
        {
            for (std::uint64_t i = next++; i < count; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };

        std::atomic<std::uint64_t> next{0};
        const auto n_threads = static_cast<std::uint64_t>(workers) < count ? static_cast<std::uint64_t>(workers) : count;
        if (n_threads <= 1)
            body(next);
        else
        {
            std::vector<std::thread> pool;
            for (std::uint64_t w = 0; w < n_threads; ++w)
                pool.emplace_back(body, std::ref(next));
            for (auto &t : pool)
                t.join();
        }
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    Tally run_monte_carlo(const McControl &ctl, const TrialFn &trial)
    {
        ctl.validate();
        Tally total;
        std::uint64_t done = 0;
        while (true)
        {
            const std::uint64_t batch = std::min(ctl.batch_size, ctl.max_trials - done);
            std::vector<Tally> results(batch);
            parallel_for(batch, ctl.workers, [&](std::uint64_t i) { results[i] = trial(done + i); });
            for (const auto &r : results)
                total += r;
            done += batch;

            if (done >= ctl.max_trials)
                break;
            if (done >= ctl.min_trials && total.errors >= ctl.target_errors)
                break;
        }
        total.trials = done;
        return total;
    }
}
