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

#include "rislink/channel.hpp"

#include <cmath>
#include <limits>

namespace rislink
{
    namespace
    {
        double rician_los_weight(double k)
        {
            if (std::isinf(k))
                return 1.0;
            return std::sqrt(k / (1.0 + k));
        }

        double rician_nlos_weight(double k)
        {
            if (std::isinf(k))
                return 0.0;
            return std::sqrt(1.0 / (1.0 + k));
        }

        void require_factor(double k)
        {
            if (!(k >= 0.0))
                throw std::invalid_argument("Rician factor must be non-negative.");
        }

        Angles random_angles(RngStream &rng)
        {
            Angles a;
            a.theta = rng.uniform(0.0, pi);
            a.phi = rng.uniform(0.0, 2.0 * pi);
            return a;
        }
    }

    ArrayGeometry ArrayGeometry::ula(int n, double spacing, double wavelength)
    {
        ArrayGeometry g{ArrayKind::ula, n, 1, spacing, wavelength};
        g.validate();
        return g;
    }

    ArrayGeometry ArrayGeometry::upa(int nx, int ny, double spacing, double wavelength)
    {
        ArrayGeometry g{ArrayKind::upa, nx, ny, spacing, wavelength};
        g.validate();
        return g;
    }

    void ArrayGeometry::validate() const
    {
        if (nx < 1 || ny < 1)
            throw std::invalid_argument("Array element counts must be at least 1.");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw std::invalid_argument("Element spacing must be positive.");
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw std::invalid_argument("Wavelength must be positive.");
    }

    bool Angles::valid() const
    {
        return theta >= 0.0 && theta <= pi && phi >= 0.0 && phi < 2.0 * pi;
    }

    CVector ula_steering(double theta, int n, double spacing, double wavelength)
    {
        if (!std::isfinite(theta))
            throw std::invalid_argument("Steering angle must be finite.");
        if (n < 1)
            throw std::invalid_argument("ULA needs at least one element.");
        if (!(spacing > 0.0) || !(wavelength > 0.0))
            throw std::invalid_argument("Spacing and wavelength must be positive.");

        const double step = 2.0 * pi * (spacing / wavelength) * std::sin(theta);
        CVector e(n);
        for (int k = 0; k < n; ++k)
            e[k] = std::polar(1.0, step * k);
        return e;
    }

    CVector upa_steering(const Angles &angles, const ArrayGeometry &geom)
    {
        geom.validate();
        if (geom.kind != ArrayKind::upa)
            throw std::invalid_argument("upa_steering requires a UPA geometry.");
        if (!std::isfinite(angles.theta) || !std::isfinite(angles.phi))
            throw std::invalid_argument("Steering angles must be finite.");

        const double k = 2.0 * pi / geom.wavelength * geom.spacing;
        const double ux = std::sin(angles.phi) * std::sin(angles.theta);
        const double uy = std::cos(angles.theta);
        const double norm = 1.0 / std::sqrt(static_cast<double>(geom.nx) * geom.ny);

        CVector a(geom.nx * geom.ny);
        for (int m = 0; m < geom.nx; ++m)
            for (int n = 0; n < geom.ny; ++n)
                a[m * geom.ny + n] = norm * std::polar(1.0, k * (m * ux + n * uy));
        return a;
    }

    CMatrix los_component(const CVector &rx_steering, const CVector &tx_steering)
    {
        if (rx_steering.size() == 0 || tx_steering.size() == 0)
            throw std::invalid_argument("Steering vectors must be non-empty.");
        return rx_steering * tx_steering.adjoint();
    }

    double RicianLink::los_weight() const { return rician_los_weight(rician_factor); }
    double RicianLink::nlos_weight() const { return rician_nlos_weight(rician_factor); }

    CMatrix mix_rician(const RicianLink &link, const CMatrix &nlos)
    {
        require_factor(link.rician_factor);
        if (nlos.rows() != link.los.rows() || nlos.cols() != link.los.cols())
            throw std::invalid_argument("NLoS draw does not match the LoS dimensions.");
        if (link.nlos_weight() == 0.0)
            return link.path_gain * link.los;
        return link.path_gain * (link.los_weight() * link.los + link.nlos_weight() * nlos);
    }

    CMatrix draw_rician(const RicianLink &link, RngStream &rng)
    {
        require_factor(link.rician_factor);
        return mix_rician(link, rng.complex_normal_matrix(link.los.rows(), link.los.cols()));
    }

    JakesFading::JakesFading(Eigen::Index rows, Eigen::Index cols, double max_doppler, RngStream &rng, int oscillators)
        : rows_(rows), cols_(cols), oscillators_(oscillators), max_doppler_(max_doppler)
    {
        if (rows < 0 || cols < 0 || oscillators < 1)
            throw std::invalid_argument("Invalid Jakes fading dimensions.");
        if (!(max_doppler >= 0.0))
            throw std::invalid_argument("Maximum Doppler shift must be non-negative.");

        const auto entries = static_cast<std::size_t>(rows * cols);
        cos_alpha_.resize(entries * oscillators_);
        phase_.resize(entries * oscillators_);
        for (std::size_t e = 0; e < entries; ++e)
        {
            const double rotation = rng.uniform(0.0, 2.0 * pi);
            for (int i = 0; i < oscillators_; ++i)
            {
                const double alpha = (2.0 * pi * i + rotation) / oscillators_;
                cos_alpha_[e * oscillators_ + i] = std::cos(alpha);
                phase_[e * oscillators_ + i] = rng.uniform(0.0, 2.0 * pi);
            }
        }
        current_ = at(0.0);
    }

    CMatrix JakesFading::at(double t) const
    {
        CMatrix out(rows_, cols_);
        const double w = 2.0 * pi * max_doppler_ * t;
        const double scale = 1.0 / std::sqrt(static_cast<double>(oscillators_));
        for (Eigen::Index c = 0; c < cols_; ++c)
            for (Eigen::Index r = 0; r < rows_; ++r)
            {
                // column-major entry index, matching the construction order
                const auto e = static_cast<std::size_t>(c * rows_ + r) * oscillators_;
                double re = 0.0, im = 0.0;
                for (int i = 0; i < oscillators_; ++i)
                {
                    const double arg = w * cos_alpha_[e + i] + phase_[e + i];
                    re += std::cos(arg);
                    im += std::sin(arg);
                }
                out(r, c) = cplx(re * scale, im * scale);
            }
        return out;
    }

    const CMatrix &JakesFading::evolve(double dt)
    {
        if (!(dt > 0.0))
            throw std::invalid_argument("Time step must be positive.");
        time_ += dt;
        current_ = at(time_);
        return current_;
    }

    const CMatrix &evolve_nlos(JakesFading &fading, double dt) { return fading.evolve(dt); }

    ReflectionPattern ReflectionPattern::random(Eigen::Index n, RngStream &rng)
    {
        RVector p(n);
        for (Eigen::Index i = 0; i < n; ++i)
            p[i] = rng.uniform(0.0, 2.0 * pi);
        return {p};
    }

    CVector ReflectionPattern::diagonal() const
    {
        CVector d(phases.size());
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            d[i] = std::polar(1.0, phases[i]);
        return d;
    }

    CRow cascade(const CRow &row, const ReflectionPattern &omega, const CMatrix &mat)
    {
        if (row.size() != omega.size() || mat.rows() != omega.size())
            throw std::invalid_argument("Cascade dimensions do not conform.");
        const CRow weighted = row.cwiseProduct(omega.diagonal().transpose());
        return weighted * mat;
    }

    double RicianParts::los_weight() const { return rician_los_weight(factor); }
    double RicianParts::nlos_weight() const { return rician_nlos_weight(factor); }

    CascadeTerms cascade_terms(const RicianParts &row, const ReflectionPattern &omega, const RicianParts &mat)
    {
        if (row.los.rows() != 1 || row.nlos.rows() != 1)
            throw std::invalid_argument("Cascade row factor must have a single row.");
        const CRow rl = row.los.row(0);
        const CRow rn = row.nlos.row(0);
        CascadeTerms t;
        t.los_los = row.los_weight() * mat.los_weight() * cascade(rl, omega, mat.los);
        t.los_nlos = row.los_weight() * mat.nlos_weight() * cascade(rl, omega, mat.nlos);
        t.nlos_los = row.nlos_weight() * mat.los_weight() * cascade(rn, omega, mat.los);
        t.nlos_nlos = row.nlos_weight() * mat.nlos_weight() * cascade(rn, omega, mat.nlos);
        return t;
    }

    ReflectionPattern align_phases_to_los(const CRow &q_los, const CMatrix &g_los, Eigen::Index target_col)
    {
        if (q_los.size() != g_los.rows())
            throw std::invalid_argument("Alignment dimensions do not conform.");
        if (target_col < 0 || target_col >= g_los.cols())
            throw std::invalid_argument("Alignment target column out of range.");
        RVector phases(q_los.size());
        for (Eigen::Index n = 0; n < q_los.size(); ++n)
        {
            const double p = -std::arg(q_los[n] * g_los(n, target_col));
            phases[n] = p < 0.0 ? p + 2.0 * pi : p;
        }
        return {phases};
    }

    double path_gain(double distance, double exponent)
    {
        if (!(distance > 0.0) || !(exponent >= 0.0))
            throw std::invalid_argument("Path gain needs a positive distance and non-negative exponent.");
        return std::pow(distance, -0.5 * exponent);
    }

    ChannelRealization::ChannelRealization(const ChannelGeometry &geom, RngStream &rng)
    {
        if (geom.n_bs < 1 || geom.ris_nx < 1 || geom.ris_ny < 1 || geom.n_users < 1)
            throw std::invalid_argument("Channel geometry counts must be at least 1.");
        require_factor(geom.bs_ris_factor);
        require_factor(geom.ris_user_factor);
        require_factor(geom.bs_user_factor);

        const double lambda = geom.wavelength;
        const double spacing = geom.spacing_wavelengths * lambda;
        const auto ris = ArrayGeometry::upa(geom.ris_nx, geom.ris_ny, spacing, lambda);
        const int n = ris.size();
        // LoS entries are unit magnitude: the unit-norm planar response is rescaled by sqrt(N).
        const double ris_scale = std::sqrt(static_cast<double>(n));

        // BS-RIS: static for the frame
        const Angles ris_in = random_angles(rng);
        const double bs_out = rng.uniform(0.0, pi);
        bs_ris_.los = los_component(ris_scale * upa_steering(ris_in, ris), ula_steering(bs_out, geom.n_bs, spacing, lambda));
        bs_ris_.nlos = rng.complex_normal_matrix(n, geom.n_bs);
        bs_ris_.factor = geom.bs_ris_factor;
        bs_ris_gain_ = geom.bs_ris_gain;

        // RIS-user: single-antenna users, g_m^LoS = a_UE * a_RIS^H with a_UE = 1
        ris_user_los_.resize(geom.n_users, n);
        for (int m = 0; m < geom.n_users; ++m)
        {
            const Angles out = random_angles(rng);
            ris_user_los_.row(m) = (ris_scale * upa_steering(out, ris)).adjoint();
        }
        ris_user_factor_ = geom.ris_user_factor;
        ris_user_gain_ = RVector::Ones(geom.n_users);
        if (!geom.ris_user_gain.empty())
        {
            if (static_cast<int>(geom.ris_user_gain.size()) != geom.n_users)
                throw std::invalid_argument("ris_user_gain must have one entry per user.");
            for (int m = 0; m < geom.n_users; ++m)
                ris_user_gain_[m] = geom.ris_user_gain[m];
        }
        ris_user_nlos_ = JakesFading(geom.n_users, n, geom.max_doppler, rng);

        direct_link_ = geom.direct_link;
        bs_user_factor_ = geom.bs_user_factor;
        bs_user_gain_ = RVector::Zero(geom.n_users);
        bs_user_los_ = CMatrix::Zero(geom.n_users, geom.n_bs);
        if (direct_link_)
        {
            for (int m = 0; m < geom.n_users; ++m)
                bs_user_los_.row(m) = ula_steering(rng.uniform(0.0, pi), geom.n_bs, spacing, lambda).adjoint();
            if (static_cast<int>(geom.bs_user_gain.size()) != geom.n_users)
                throw std::invalid_argument("bs_user_gain must have one entry per user when the direct link is on.");
            for (int m = 0; m < geom.n_users; ++m)
                bs_user_gain_[m] = geom.bs_user_gain[m];
            bs_user_nlos_ = JakesFading(geom.n_users, geom.n_bs, geom.max_doppler, rng);
        }

        switch (geom.phase_mode)
        {
        case PhaseMode::aligned:
            omega_ = align_phases_to_los(ris_user_los_.row(0), bs_ris_.los, 0);
            break;
        case PhaseMode::fixed:
            omega_ = ReflectionPattern::zeros(n);
            break;
        case PhaseMode::random:
            omega_ = ReflectionPattern::random(n, rng);
            break;
        }
    }

    RicianParts ChannelRealization::bs_ris_parts() const
    {
        return {bs_ris_gain_ * bs_ris_.los, bs_ris_gain_ * bs_ris_.nlos, bs_ris_.factor};
    }

    RicianParts ChannelRealization::ris_user_parts(double t) const
    {
        const auto gains = ris_user_gain_.asDiagonal();
        return {gains * ris_user_los_, gains * ris_user_nlos_.at(t), ris_user_factor_};
    }

    CMatrix ChannelRealization::bs_ris() const { return bs_ris_parts().combined(); }

    CMatrix ChannelRealization::ris_user(double t) const { return ris_user_parts(t).combined(); }

    CMatrix ChannelRealization::direct(double t) const
    {
        if (!direct_link_)
            return CMatrix::Zero(n_users(), n_bs());
        const RicianParts parts{bs_user_los_, bs_user_nlos_.at(t), bs_user_factor_};
        return bs_user_gain_.asDiagonal() * parts.combined();
    }

    CMatrix ChannelRealization::downlink(double t) const
    {
        const CMatrix g = ris_user(t);
        CMatrix h = g * omega_.diagonal().asDiagonal() * bs_ris();
        if (direct_link_)
            h += direct(t);
        return h;
    }
}
