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

#ifndef RISLINK_CHANNEL_HPP
#define RISLINK_CHANNEL_HPP

#include "rislink/common.hpp"
#include "rislink/rng.hpp"

#include <vector>

// Geometric Rician channels: steering vectors, LoS outer products, Rician mixing,
// sum-of-sinusoids Jakes evolution, RIS reflection and cascaded channels.
//
// Matrix orientation follows the receive-by-transmit convention:
//  - BS-RIS link Q:   N x N_t  (rows = RIS elements)
//  - RIS-user link g: 1 x N per user, stacked into N_k x N
//  - cascade h_m = g_m * Omega * Q   (1 x N_t)
// The uplink uses the reciprocal channels, so the uplink matrix C (N_t x N_k) is H^T.

namespace rislink
{
    enum class ArrayKind
    {
        ula,
        upa
    };

    struct ArrayGeometry
    {
        ArrayKind kind = ArrayKind::ula;
        int nx = 1;             // N_t for a ULA
        int ny = 1;             // ignored for a ULA
        double spacing = 0.5;   // meters
        double wavelength = 1.0; // meters

        static ArrayGeometry ula(int n, double spacing, double wavelength);
        static ArrayGeometry upa(int nx, int ny, double spacing, double wavelength);

        int size() const { return kind == ArrayKind::ula ? nx : nx * ny; }
        void validate() const;
    };

    // theta in [0, pi] (elevation), phi in [0, 2 pi) (azimuth)
    struct Angles
    {
        double theta = 0.0;
        double phi = 0.0;

        bool valid() const;
    };

    // e(theta, n): element k is exp(j 2 pi k (d / lambda) sin(theta)); element 0 is 1.
    CVector ula_steering(double theta, int n, double spacing, double wavelength);

    // Unit-norm planar response, element index m * N_y + n.
    CVector upa_steering(const Angles &angles, const ArrayGeometry &geom);

    // rx * tx^H, rank one.
    CMatrix los_component(const CVector &rx_steering, const CVector &tx_steering);

    // One Rician link: path_gain * (sqrt(K/(1+K)) los + sqrt(1/(1+K)) nlos).
    struct RicianLink
    {
        CMatrix los;
        double rician_factor = 0.0;
        double path_gain = 1.0;

        double los_weight() const;
        double nlos_weight() const;
    };

    CMatrix mix_rician(const RicianLink &link, const CMatrix &nlos);
    CMatrix draw_rician(const RicianLink &link, RngStream &rng);

    /// Common Doppler rotation of a moving terminal.
    struct DopplerState
    {
        double speed = 0.0;        // m/s
        double carrier_freq = 5.9e9; // Hz
        double current_phase = 0.0;  // radians

        double max_shift() const { return speed * carrier_freq / speed_of_light; }
        void advance(double dt) { current_phase += 2.0 * pi * max_shift() * dt; }
        cplx rotation() const { return std::polar(1.0, current_phase); }
    };

    /// Time-correlated NLoS entries with the classical Jakes spectrum.
    ///
    /// Each entry is a sum of `oscillators` unit phasors with arrival angles
    /// alpha_i = (2 pi i + theta) / M, per-entry random rotation theta and per-oscillator
    /// random phases. The ensemble autocorrelation is J0(2 pi f_max tau) and every entry
    /// keeps unit mean power at all times.
    class JakesFading
    {
    public:
        JakesFading() = default;
        JakesFading(Eigen::Index rows, Eigen::Index cols, double max_doppler, RngStream &rng, int oscillators = 16);

        Eigen::Index rows() const { return rows_; }
        Eigen::Index cols() const { return cols_; }
        double max_doppler() const { return max_doppler_; }
        double time() const { return time_; }

        CMatrix at(double t) const;
        const CMatrix &current() const { return current_; }
        const CMatrix &evolve(double dt);

    private:
        Eigen::Index rows_ = 0;
        Eigen::Index cols_ = 0;
        int oscillators_ = 0;
        double max_doppler_ = 0.0;
        double time_ = 0.0;
        std::vector<double> cos_alpha_; // entry-major, oscillators_ per entry
        std::vector<double> phase_;
        CMatrix current_;
    };

    /// Advance the fading state by dt seconds and return the new NLoS entries.
    const CMatrix &evolve_nlos(JakesFading &fading, double dt);

    struct ReflectionPattern
    {
        RVector phases;

        static ReflectionPattern zeros(Eigen::Index n) { return {RVector::Zero(n)}; }
        static ReflectionPattern random(Eigen::Index n, RngStream &rng);

        Eigen::Index size() const { return phases.size(); }
        CVector diagonal() const;
    };

    // row * diag(exp(j phi)) * mat
    CRow cascade(const CRow &row, const ReflectionPattern &omega, const CMatrix &mat);

    /// LoS/NLoS split of one factor of a cascade, before Rician weighting.
    struct RicianParts
    {
        CMatrix los;
        CMatrix nlos;
        double factor = 0.0;

        double los_weight() const;
        double nlos_weight() const;
        CMatrix combined() const { return los_weight() * los + nlos_weight() * nlos; }
    };

    /// The four weighted products LoS.LoS, LoS.NLoS, NLoS.LoS, NLoS.NLoS of a cascade
    /// row * Omega * mat. Their sum is the full cascade.
    struct CascadeTerms
    {
        CRow los_los;
        CRow los_nlos;
        CRow nlos_los;
        CRow nlos_nlos;

        CRow sum() const { return los_los + los_nlos + nlos_los + nlos_nlos; }
    };

    CascadeTerms cascade_terms(const RicianParts &row, const ReflectionPattern &omega, const RicianParts &mat);

    // Co-phases every term of q_los * Omega * G_los[:, target_col].
    ReflectionPattern align_phases_to_los(const CRow &q_los, const CMatrix &g_los, Eigen::Index target_col);

    // Amplitude gain d^(-alpha/2) with 1 m reference distance.
    double path_gain(double distance, double exponent);

    enum class PhaseMode
    {
        aligned,
        fixed,
        random
    };

    struct ChannelGeometry
    {
        int n_bs = 128;
        int ris_nx = 8;
        int ris_ny = 8;
        int n_users = 8;
        double spacing_wavelengths = 0.5;
        double wavelength = speed_of_light / 5.9e9;
        double bs_ris_factor = 10.0;   // K
        double ris_user_factor = 10.0; // V
        double bs_user_factor = 10.0;
        double bs_ris_gain = 1.0;
        std::vector<double> ris_user_gain;
        std::vector<double> bs_user_gain;
        bool direct_link = false;
        double max_doppler = 0.0;
        PhaseMode phase_mode = PhaseMode::aligned;
    };

    /// One frame of channel state. The BS-RIS link is static over the frame; the
    /// RIS-user and direct links evolve with Jakes fading. The common Doppler rotation
    /// is not part of the realization, callers apply it from a DopplerState.
    class ChannelRealization
    {
    public:
        ChannelRealization() = default;
        ChannelRealization(const ChannelGeometry &geom, RngStream &rng);

        int n_bs() const { return static_cast<int>(bs_ris_.los.cols()); }
        int n_ris() const { return static_cast<int>(bs_ris_.los.rows()); }
        int n_users() const { return static_cast<int>(ris_user_los_.rows()); }

        const ReflectionPattern &reflection() const { return omega_; }

        // LoS/NLoS parts with path gains folded in (Rician weights not applied).
        RicianParts bs_ris_parts() const;           // N x N_t
        RicianParts ris_user_parts(double t) const; // N_k x N

        CMatrix bs_ris() const;            // Q, N x N_t, with path gain
        CMatrix ris_user(double t) const;  // G_dl, N_k x N, with per-user path gains
        CMatrix direct(double t) const;    // N_k x N_t, zero when the direct link is off
        CMatrix downlink(double t) const;  // H(t), N_k x N_t

    private:
        RicianParts bs_ris_;
        double bs_ris_gain_ = 1.0;
        CMatrix ris_user_los_;
        double ris_user_factor_ = 0.0;
        RVector ris_user_gain_;
        JakesFading ris_user_nlos_;
        bool direct_link_ = false;
        CMatrix bs_user_los_;
        double bs_user_factor_ = 0.0;
        RVector bs_user_gain_;
        JakesFading bs_user_nlos_;
        ReflectionPattern omega_;
    };
}

#endif
