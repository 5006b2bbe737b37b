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

#ifndef RISLINK_COMMON_HPP
#define RISLINK_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rislink
{
    using cplx = std::complex<double>;

    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using CRow = Eigen::RowVectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double speed_of_light = 3.0e8; // m/s

    // Numerical failures that are not caller errors. The CLI maps these to exit code 3.
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class RankDeficientError : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };

    class SearchTooLargeError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Thrown when a truncated series cannot reach its tail tolerance.
    class TruncationError : public NumericalError
    {
    public:
        TruncationError(const std::string &what, double partial_sum, double tail_bound)
            : NumericalError(what), partial_sum_(partial_sum), tail_bound_(tail_bound) {}

        double partial_sum() const noexcept { return partial_sum_; }
        double tail_bound() const noexcept { return tail_bound_; }

    private:
        double partial_sum_;
        double tail_bound_;
    };

    /// Scalar Gaussian observation model: mean and variance of z or xi.
    struct GaussianSerModel
    {
        double mu = 0.0;
        double sigma2 = 1.0;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
}

#endif
