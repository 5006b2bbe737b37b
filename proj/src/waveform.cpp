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

#include "rislink/waveform.hpp"

#include <cmath>

namespace rislink
{
    namespace
    {
        bool near_integer(double v, double tol = 1e-9)
        {
            return std::abs(v - std::round(v)) <= tol * std::max(1.0, std::abs(v));
        }
    }

    ComplementarySymbol::ComplementarySymbol(int levels, std::vector<int> s) : levels_(levels), s_(std::move(s))
    {
        if (levels_ < 2)
            throw std::invalid_argument("Amplitude alphabet needs at least 2 levels.");
        for (int v : s_)
            if (v < 0 || v > levels_ - 1)
                throw std::invalid_argument("Symbol amplitude outside [0, A-1].");
    }

    ComplementarySymbol ComplementarySymbol::from_index(std::uint64_t index, int n)
    {
        std::vector<int> s(n);
        for (int k = 0; k < n; ++k)
            s[k] = static_cast<int>((index >> (n - 1 - k)) & 1u);
        return ComplementarySymbol(2, std::move(s));
    }

    std::vector<int> ComplementarySymbol::s_bar() const
    {
        std::vector<int> out(s_.size());
        for (std::size_t i = 0; i < s_.size(); ++i)
            out[i] = levels_ - 1 - s_[i];
        return out;
    }

    RVector ComplementarySymbol::amplitudes() const
    {
        RVector v(size());
        for (int i = 0; i < size(); ++i)
            v[i] = s_[i];
        return v;
    }

    RVector ComplementarySymbol::complement() const
    {
        RVector v(size());
        for (int i = 0; i < size(); ++i)
            v[i] = levels_ - 1 - s_[i];
        return v;
    }

    RVector ComplementarySymbol::x_bar() const
    {
        return 2.0 * amplitudes().array() - 1.0;
    }

    bool TonePair::orthogonal(double tol) const
    {
        const double k = (f2 - f1) * symbol_period;
        return near_integer(k, tol) && std::round(k) != 0.0;
    }

    CMatrix modulate(const ComplementarySymbol &sym, const TonePair &tones, double sample_rate)
    {
        const double per_symbol = sample_rate * tones.symbol_period;
        if (!near_integer(per_symbol) || std::round(per_symbol) < 8.0)
            throw std::invalid_argument("Samples per symbol must be an integer of at least 8.");
        if (!near_integer(tones.f1 * tones.symbol_period) || !near_integer(tones.f2 * tones.symbol_period))
            throw std::invalid_argument("Both tones must complete an integer number of cycles per symbol.");

        const auto n_samples = static_cast<Eigen::Index>(std::round(per_symbol));
        const double scale = 1.0 / (sym.levels() - 1);
        const RVector s = sym.amplitudes();
        const RVector sb = sym.complement();

        CMatrix out(sym.size(), n_samples);
        for (Eigen::Index i = 0; i < n_samples; ++i)
        {
            const double t = static_cast<double>(i) / sample_rate;
            const cplx e1 = std::polar(1.0, 2.0 * pi * tones.f1 * t);
            const cplx e2 = std::polar(1.0, 2.0 * pi * tones.f2 * t);
            for (int n = 0; n < sym.size(); ++n)
                out(n, i) = scale * (s[n] * e1 + sb[n] * e2);
        }
        return out;
    }

    cplx correlate(const CVector &samples, double tone_freq, double symbol_period)
    {
        const auto n = samples.size();
        if (n == 0)
            throw std::invalid_argument("Correlator needs at least one sample.");
        const double dt = symbol_period / static_cast<double>(n);
        cplx acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            acc += samples[i] * std::polar(1.0, -2.0 * pi * tone_freq * (i * dt));
        return acc / static_cast<double>(n);
    }

    CorrelatorPair apply_doppler(const CorrelatorPair &pair, double nu)
    {
        const cplx r = std::polar(1.0, nu);
        return {r * pair.y1, r * pair.y2};
    }

    CVector apply_doppler(const CVector &samples, double nu) { return std::polar(1.0, nu) * samples; }

    double detect_z(const CorrelatorPair &pair) { return std::norm(pair.y1) - std::norm(pair.y2); }

    CorrelatorPair receive(const CRow &h, const RVector &s, const RVector &s_bar, double nu, cplx n1, cplx n2)
    {
        const cplx r = std::polar(1.0, nu);
        const cplx a = h * s.cast<cplx>();
        const cplx b = h * s_bar.cast<cplx>();
        return {r * a + n1, r * b + n2};
    }

    double equivalent_noise(const CRow &h, const ComplementarySymbol &sym, cplx n1, cplx n2)
    {
        const cplx hs = h * sym.amplitudes().cast<cplx>();
        const cplx hsb = h * sym.complement().cast<cplx>();
        return 2.0 * std::real(hs * std::conj(n1)) + std::norm(n1) - 2.0 * std::real(hsb * std::conj(n2)) - std::norm(n2);
    }
}
