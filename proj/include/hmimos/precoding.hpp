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

#include "green_channel.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

namespace hmimos
{

// ---- user clustering -------------------------------------------------------

struct cluster_assignment
{
    size_t users = 0;
    std::array<std::vector<size_t>, 3> members; // user indices per polarization, nearest first

    int polarization_of(size_t k) const
    {
        for (int q = 0; q < 3; ++q)
            if (std::find(members[q].begin(), members[q].end(), k) != members[q].end())
                return q;
        return -1;
    }

    // 0/1 per user: 1 when the user is served on polarization q.
    std::vector<int> indicator(int q) const
    {
        std::vector<int> v(users, 0);
        for (auto k : members[size_t(q)])
            v[k] = 1;
        return v;
    }

    // Row selector (|members_q| * nr) x (users * nr) picking the members' rows
    // out of a user-ordered stack with nr rows per user.
    rmat selection(int q, index_t nr) const
    {
        const auto &m = members[size_t(q)];
        rmat S = rmat::Zero(index_t(m.size()) * nr, index_t(users) * nr);
        for (size_t i = 0; i < m.size(); ++i)
            for (index_t r = 0; r < nr; ++r)
                S(index_t(i) * nr + r, index_t(m[i]) * nr + r) = 1.0;
        return S;
    }
};

inline cluster_assignment cluster_users(const std::vector<double> &distance)
{
    const size_t K = distance.size();
    if (K == 0 || K % 3 != 0)
        throw config_error("K must be divisible by 3 (got K=" + std::to_string(K) + ")");
    std::vector<size_t> order(K);
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return distance[a] < distance[b]; });
    cluster_assignment a;
    a.users = K;
    for (size_t i = 0; i < K; ++i)
        a.members[i % 3].push_back(order[i]);
    return a;
}

inline std::array<cmat, 3> cluster_subchannels(const polarized_channel &H, const cluster_assignment &a)
{
    std::array<cmat, 3> out;
    for (int q = 0; q < 3; ++q)
    {
        index_t rows = 0;
        for (auto k : a.members[size_t(q)])
            rows += H.user_rows(k);
        cmat S(rows, H.tx_count());
        index_t r = 0;
        for (auto k : a.members[size_t(q)])
        {
            S.middleRows(r, H.user_rows(k)) = H.block(q, q, k);
            r += H.user_rows(k);
        }
        out[size_t(q)] = std::move(S);
    }
    return out;
}

// ---- first layer: cross-polarization elimination ---------------------------

struct first_layer
{
    std::array<cmat, 3> P; // per transmit polarization, Ns x Ns

    cmat stacked() const
    {
        cmat S(P[0].rows() * 3, P[0].cols());
        S << P[0], P[1], P[2];
        return S;
    }
};

inline first_layer gaussian_elim_precoder(const polarized_channel &H, double tol = default_tol)
{
    const double scale = H.stacked().norm();
    auto require = [&](const cmat &B, const char *name) {
        if (!(B.norm() > tol * scale))
            throw degeneracy_error(name, std::string("precoder degeneracy: block ") + name + " has collapsed");
    };
    const cmat Hxy = H.block(px, py), Hyx = H.block(py, px), Hzx = H.block(pz, px);
    require(Hxy, "H_xy");
    require(Hyx, "H_yx");
    require(Hzx, "H_zx");

    const cmat A = pinv(Hxy, tol) * H.block(px, pz);
    const cmat B = pinv(Hyx, tol) * H.block(py, pz);
    const cmat M = pinv(Hzx, tol) * H.block(pz, py);
    require(M, "pinv(H_zx) H_zy");
    const cmat C = -pinv(M, tol) * B - A;

    const cmat C0 = null_projector(C, tol);
    if (!(C0.trace().real() > 0.5))
        throw degeneracy_error("C", "precoder degeneracy: elimination residual C has an empty null space");

    // Adjoint arrangement of the projector formula: columns stay inside
    // null(C) and Hzz Pz = Hzz on the reachable subspace.
    const cmat Hzz = H.block(pz, pz);
    const cmat S = Hzz * C0 * Hzz.adjoint();
    if (!(S.norm() > tol * Hzz.squaredNorm()))
        throw degeneracy_error("H_zz C0 H_zz^H", "precoder degeneracy: block H_zz C0 H_zz^H has collapsed");

    first_layer out;
    out.P[pz] = C0 * Hzz.adjoint() * pinv(S, tol) * Hzz;
    out.P[py] = -A * out.P[pz];
    out.P[px] = -B * out.P[pz];
    return out;
}

// ||H_cross P|| / (||H_cross|| ||P||)
inline double cancellation_residual(const polarized_channel &H, const first_layer &P)
{
    const cmat X = H.cross_part();
    const cmat Ps = P.stacked();
    const double den = X.norm() * Ps.norm();
    return den > 0.0 ? (X * Ps).norm() / den : 0.0;
}

// ---- second layer: block diagonalization ------------------------------------

struct bd_user
{
    cmat channel; // rows seen by this user, Nr_k x Ns
    cmat F;       // Ns x streams, orthonormal columns
    cmat U;       // Nr_k x streams receive directions
    rvec gain;    // stream singular values, descending
};

struct bd_result
{
    std::vector<bd_user> user;

    cmat stacked_F() const
    {
        index_t cols = 0, rows = 0;
        for (const auto &u : user)
        {
            cols += u.F.cols();
            rows = std::max(rows, u.F.rows());
        }
        cmat F = cmat::Zero(rows, cols);
        index_t c = 0;
        for (const auto &u : user)
        {
            F.middleCols(c, u.F.cols()) = u.F;
            c += u.F.cols();
        }
        return F;
    }

    index_t streams() const
    {
        index_t s = 0;
        for (const auto &u : user)
            s += u.F.cols();
        return s;
    }
};

// Per-user channels (Nr_k x Ns each). Streams whose singular value is at or
// below tol times the largest singular value of the stacked channel are
// dropped, as are streams beyond the user's row count.
inline bd_result bd_precoder(const std::vector<cmat> &users, double tol = default_tol)
{
    bd_result out;
    if (users.empty())
        return out;
    const index_t ns = users[0].cols();
    index_t total_rows = 0;
    for (const auto &h : users)
    {
        if (h.cols() != ns)
            throw dimension_error("bd_precoder: users disagree on transmit size");
        total_rows += h.rows();
    }
    cmat all(total_rows, ns);
    {
        index_t r = 0;
        for (const auto &h : users)
        {
            all.middleRows(r, h.rows()) = h;
            r += h.rows();
        }
    }
    const rvec sv_all = singular_values(all);
    const double ref = sv_all.size() ? sv_all(0) : 0.0;

    for (size_t k = 0; k < users.size(); ++k)
    {
        bd_user u;
        u.channel = users[k];
        cmat V0;
        if (users.size() == 1)
            V0 = cmat::Identity(ns, ns);
        else
        {
            cmat T(total_rows - users[k].rows(), ns);
            index_t r = 0;
            for (size_t j = 0; j < users.size(); ++j)
            {
                if (j == k)
                    continue;
                T.middleRows(r, users[j].rows()) = users[j];
                r += users[j].rows();
            }
            const svd_parts tp = svd_partition(T, tol);
            V0 = tp.V0;
            if (V0.cols() == 0)
                throw capacity_error("bd_precoder: user " + std::to_string(k) +
                                     " has no interference-free subspace (too many users for the transmit surface)");
        }
        index_t keep = 0;
        cmat V1, U;
        rvec s;
        if (ref > 0.0 && u.channel.rows() > 0)
        {
            const cmat Hd = u.channel * V0;
            const svd_parts dp = svd_partition(Hd, 0.0);
            s = dp.singular;
            while (keep < s.size() && keep < u.channel.rows() && s(keep) > tol * ref)
                ++keep;
            cmat Vfull(Hd.cols(), dp.V1.cols() + dp.V0.cols());
            Vfull << dp.V1, dp.V0;
            V1 = Vfull.leftCols(keep);
            U = dp.U.leftCols(keep);
        }
        u.F = keep ? cmat(V0 * V1) : cmat(ns, 0);
        u.U = keep ? U : cmat(u.channel.rows(), 0);
        u.gain = keep ? rvec(s.head(keep)) : rvec();
        out.user.push_back(std::move(u));
    }
    return out;
}

// max over q, k' != k of ||H_k' F_k|| / (||H_k'|| ||F_k||)
inline double bd_leakage(const bd_result &r)
{
    double worst = 0.0;
    for (size_t k = 0; k < r.user.size(); ++k)
        for (size_t j = 0; j < r.user.size(); ++j)
        {
            if (j == k || r.user[k].F.cols() == 0)
                continue;
            const double den = r.user[j].channel.norm() * r.user[k].F.norm();
            if (den > 0.0)
                worst = std::max(worst, (r.user[j].channel * r.user[k].F).norm() / den);
        }
    return worst;
}

// ---- precoder sets -----------------------------------------------------------

enum class scheme
{
    user_cluster,
    two_layer
};

inline std::string to_string(scheme s) { return s == scheme::two_layer ? "two-layer" : "uc"; }

inline scheme scheme_from_string(const std::string &s)
{
    if (s == "two-layer" || s == "tl" || s == "two_layer")
        return scheme::two_layer;
    if (s == "uc" || s == "user-cluster" || s == "user_cluster")
        return scheme::user_cluster;
    throw config_error("unknown scheme '" + s + "'");
}

struct precoder_set
{
    scheme kind = scheme::two_layer;
    first_layer layer1;                     // two-layer only
    std::array<bd_result, 3> layer2;        // per polarization
    std::array<std::vector<size_t>, 3> served; // user index of each layer2 entry

    // Per-polarization stream gains, one vector per served user.
    std::array<std::vector<rvec>, 3> gains() const
    {
        std::array<std::vector<rvec>, 3> g;
        for (int q = 0; q < 3; ++q)
            for (const auto &u : layer2[size_t(q)].user)
                g[size_t(q)].push_back(u.gain);
        return g;
    }
};

// Polarization q is dropped when its first-layer output is numerically zero
// relative to the whole precoder.
inline bool polarization_vanishes(const cmat &Hqq, const cmat &Pq, double p_norm, double tol)
{
    return !((Hqq * Pq).norm() > tol * Hqq.norm() * p_norm);
}

inline precoder_set two_layer_precoder(const polarized_channel &H, double tol = default_tol)
{
    precoder_set s;
    s.kind = scheme::two_layer;
    s.layer1 = gaussian_elim_precoder(H, tol);
    const double p_norm = s.layer1.stacked().norm();
    for (int q = 0; q < 3; ++q)
    {
        const cmat &Pq = s.layer1.P[size_t(q)];
        const bool dead = polarization_vanishes(H.block(q, q), Pq, p_norm, tol);
        std::vector<cmat> users;
        for (size_t k = 0; k < H.users(); ++k)
        {
            users.push_back(dead ? cmat::Zero(H.user_rows(k), H.tx_count()) : cmat(H.block(q, q, k) * Pq));
            s.served[size_t(q)].push_back(k);
        }
        s.layer2[size_t(q)] = bd_precoder(users, tol);
    }
    return s;
}

inline precoder_set user_cluster_precoder(const polarized_channel &H, const cluster_assignment &a,
                                          double tol = default_tol)
{
    if (a.users != H.users())
        throw dimension_error("user_cluster_precoder: assignment does not match the channel");
    precoder_set s;
    s.kind = scheme::user_cluster;
    for (int q = 0; q < 3; ++q)
    {
        std::vector<cmat> users;
        for (auto k : a.members[size_t(q)])
        {
            users.push_back(H.block(q, q, k));
            s.served[size_t(q)].push_back(k);
        }
        s.layer2[size_t(q)] = bd_precoder(users, tol);
    }
    return s;
}

// Block-diagonal effective channel: per polarization the stacked H_qq P_q F_qq
// of its served users, placed on the diagonal of a 3x3 super-matrix.
struct effective_channel
{
    std::array<cmat, 3> block;
    cmat full;
};

inline effective_channel make_effective_channel(const precoder_set &s)
{
    effective_channel e;
    index_t rows = 0, cols = 0;
    for (int q = 0; q < 3; ++q)
    {
        const auto &r = s.layer2[size_t(q)];
        index_t br = 0;
        for (const auto &u : r.user)
            br += u.channel.rows();
        const cmat F = r.stacked_F();
        cmat B(br, F.cols());
        index_t off = 0;
        for (const auto &u : r.user)
        {
            B.middleRows(off, u.channel.rows()) = u.channel * F;
            off += u.channel.rows();
        }
        e.block[size_t(q)] = std::move(B);
        rows += br;
        cols += F.cols();
    }
    e.full = cmat::Zero(rows, cols);
    index_t r0 = 0, c0 = 0;
    for (int q = 0; q < 3; ++q)
    {
        const cmat &B = e.block[size_t(q)];
        e.full.block(r0, c0, B.rows(), B.cols()) = B;
        r0 += B.rows();
        c0 += B.cols();
    }
    return e;
}

} // namespace hmimos
