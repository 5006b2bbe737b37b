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

#ifndef RISLINK_WAVEFORM_HPP
#define RISLINK_WAVEFORM_HPP

#include "rislink/common.hpp"

#include <cstdint>
#include <vector>

// Dual-frequency complementary amplitude waveform and the magnitude-difference receiver.
//
// Antenna n sends s_n on tone f1 and s_bar_n = (A - 1) - s_n on tone f2. After the two
// correlators, the receiver forms z = |y1|^2 - |y2|^2. Any rotation common to y1 and y2
// (the Doppler phase) cancels in z.

namespace rislink
{
    class ComplementarySymbol
    {
    public:
        ComplementarySymbol(int levels, std::vector<int> s);

        /// Binary symbol (A = 2) from the low `n` bits of `index`; bit n-1 maps to s_0 so
        /// increasing index is increasing lexicographic order of s.
        static ComplementarySymbol from_index(std::uint64_t index, int n);

        int levels() const { return levels_; }
        int size() const { return static_cast<int>(s_.size()); }
        const std::vector<int> &s() const { return s_; }
        std::vector<int> s_bar() const;

        RVector amplitudes() const;      // s as reals
        RVector complement() const;      // s_bar as reals
        RVector x_bar() const;           // 2 s - 1, defined for A = 2

    private:
        int levels_;
        std::vector<int> s_;
    };

    // Tone pair in baseband: f2 - f1 must equal 1 / symbol_period.
    struct TonePair
    {
        double f1 = 0.0;
        double f2 = 0.0;
        double symbol_period = 8e-6;

        static TonePair baseband(double symbol_period) { return {0.0, 1.0 / symbol_period, symbol_period}; }
        bool orthogonal(double tol = 1e-9) const;
    };

    struct CorrelatorPair
    {
        cplx y1;
        cplx y2;
    };

    /// AWGN description: sigma2 is the total complex variance E|n|^2 per correlator branch.
    /// The per-real-component variance is sigma2 / 2.
    struct NoiseModel
    {
        double sigma2 = 0.0;

        double per_component() const { return 0.5 * sigma2; }
    };

    // antennas x samples; antenna n carries (s_n e^{j w1 t} + s_bar_n e^{j w2 t}) / (A - 1).
    CMatrix modulate(const ComplementarySymbol &sym, const TonePair &tones, double sample_rate);

    // Riemann-sum correlator (1/T_s) int y(t) e^{-j w t} dt over one symbol.
    cplx correlate(const CVector &samples, double tone_freq, double symbol_period);

    CorrelatorPair apply_doppler(const CorrelatorPair &pair, double nu);
    CVector apply_doppler(const CVector &samples, double nu);

    // |y1|^2 - |y2|^2
    double detect_z(const CorrelatorPair &pair);

    /// Correlator outputs of y = h x + n for amplitude vectors s and its complement,
    /// with Doppler rotation nu and branch noises n1, n2.
    CorrelatorPair receive(const CRow &h, const RVector &s, const RVector &s_bar, double nu, cplx n1, cplx n2);

    // u = 2 Re(h s n1*) + |n1|^2 - 2 Re(h s_bar n2*) - |n2|^2
    double equivalent_noise(const CRow &h, const ComplementarySymbol &sym, cplx n1, cplx n2);
}

#endif
