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

#ifndef RISLINK_MONTECARLO_HPP
#define RISLINK_MONTECARLO_HPP

#include <cstdint>
#include <functional>

namespace rislink
{
    struct Tally
    {
        std::uint64_t errors = 0;
        std::uint64_t observations = 0; // bits or symbols
        std::uint64_t trials = 0;

        Tally &operator+=(const Tally &o)
        {
            errors += o.errors;
            observations += o.observations;
            trials += o.trials;
            return *this;
        }

        double rate() const;
        double ci95() const; // normal approximation half-width
    };

    struct McControl
    {
        std::uint64_t min_trials = 1000;
        std::uint64_t max_trials = 4000;
        std::uint64_t target_errors = 100;
        std::uint64_t batch_size = 50;
        int workers = 1;

        void validate() const;
    };

    using TrialFn = std::function<Tally(std::uint64_t trial)>;

    /// Runs trials 0, 1, 2, ... in batches of batch_size on `workers` threads.
    ///
    /// The stopping rule is evaluated only between batches and per-trial results are reduced
    /// in trial order, so the tally does not depend on the worker count. Stops once
    /// min_trials are done and either target_errors is reached or max_trials is hit.
    /// An exception from any trial is rethrown (the lowest failing index wins).
    Tally run_monte_carlo(const McControl &ctl, const TrialFn &trial);

    /// Evaluates fn(i) for i in [0, count) on `workers` threads.
    void parallel_for(std::uint64_t count, int workers, const std::function<void(std::uint64_t)> &fn);
}

#endif
