// SPDX-License-Identifier: Apache-2.0
//
// hmimos: near-field tri-polarized holographic MIMO surface simulator
// Copyright (C) 2026 The hmimos authors
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

#pragma once

#include "power.hpp"
#include "precoding.hpp"

#include <cmath>
#include <string>

namespace hmimos
{

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Noise power giving the requested SNR for a fixed transmit budget.
inline double noise_for_snr(double snr_db, double budget = 1.0) { return budget / db_to_linear(snr_db); }

// sum_j log2(1 + q * share_j * sv_j^2 / noise)
inline double spectral_efficiency(const rvec &sv, double q, const rvec &share, double noise)
{
    if (sv.size() != share.size())
        throw dimension_error("spectral_efficiency: gain and share lengths differ");
    double se = 0.0;
    for (index_t j = 0; j < sv.size(); ++j)
        se += std::log2(1.0 + q * share(j) * sv(j) * sv(j) / noise);
    return se;
}

inline double polarization_se(const stream_gains &g, const power_allocation &a, int p, double noise)
{
    double se = 0.0;
    for (size_t k = 0; k < g[size_t(p)].size(); ++k)
        se += spectral_efficiency(g[size_t(p)][k], a.polarization_power[size_t(p)], a.stream_share[size_t(p)][k], noise);
    return se;
}

inline double total_se(const stream_gains &g, const power_allocation &a, double noise)
{
    return polarization_se(g, a, px, noise) + polarization_se(g, a, py, noise) + polarization_se(g, a, pz, noise);
}

// SINR of stream i of user k on polarization p, with receive direction from
// the user's own SVD and interference from every other user's precoder.
inline double sinr(const precoder_set &s, const power_allocation &a, int p, size_t k, index_t i, double noise)
{
    const auto &users = s.layer2[size_t(p)].user;
    const bd_user &me = users.at(k);
    if (i >= me.F.cols())
        throw dimension_error("sinr: stream index out of range");
    const double q = a.polarization_power[size_t(p)];
    const cvec u = me.U.col(i);
    const double sig = std::norm(u.dot(me.channel * me.F.col(i)));
    double intf = 0.0;
    for (size_t j = 0; j < users.size(); ++j)
    {
        if (j == k)
            continue;
        for (index_t c = 0; c < users[j].F.cols(); ++c)
            intf += a.stream_share[size_t(p)][j](c) * std::norm(u.dot(me.channel * users[j].F.col(c)));
    }
    return q * a.stream_share[size_t(p)][k](i) * sig / (q * intf + noise);
}

// Equal-power log-det capacity of H scaled so that ||H||_F^2 equals its row
// count, with snr split across n_blocks transmit polarizations.
inline double capacity(const cmat &H, double snr, int n_blocks = 1)
{
    if (!(snr > 0.0))
        throw domain_error("capacity: snr must be positive");
    const double fro2 = H.squaredNorm();
    if (!(fro2 > 0.0))
        return 0.0;
    const double scale = double(H.rows()) / fro2;
    const rvec s = singular_values(H);
    double c = 0.0;
    for (index_t i = 0; i < s.size(); ++i)
        c += std::log2(1.0 + snr / double(n_blocks) * scale * s(i) * s(i));
    return c;
}

enum class pol_family
{
    tri,   // all three polarizations
    dual,  // x and y
    single // x only
};

inline std::string to_string(pol_family f)
{
    switch (f)
    {
    case pol_family::tri: return "TP";
    case pol_family::dual: return "DP";
    case pol_family::single: return "SP";
    }
    return "?";
}

inline double family_capacity(const polarized_channel &H, pol_family f, double snr)
{
    switch (f)
    {
    case pol_family::tri: return capacity(H.stacked(), snr, 3);
    case pol_family::dual: return capacity(H.xy_subchannel(), snr, 2);
    case pol_family::single: return capacity(cmat(H.block(px, px)), snr, 1);
    }
    return 0.0;
}

// Eigenvalues of B^H B, descending, one per column of B.
inline rvec eigen_spectrum(const cmat &B)
{
    if (B.size() == 0)
        throw dimension_error("eigen_spectrum: empty block");
    const rvec s = singular_values(B);
    rvec e = rvec::Zero(B.cols());
    for (index_t i = 0; i < s.size(); ++i)
        e(i) = s(i) * s(i);
    return e;
}

inline index_t significant_count(const rvec &spectrum, double fraction = 0.01)
{
    if (spectrum.size() == 0 || !(spectrum(0) > 0.0))
        return 0;
    index_t n = 0;
    for (index_t i = 0; i < spectrum.size(); ++i)
        if (spectrum(i) >= fraction * spectrum(0))
            ++n;
    return n;
}

} // namespace hmimos
