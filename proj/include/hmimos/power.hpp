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

#include "numerics.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

namespace hmimos
{

// Per polarization, per served user, stream singular values.
using stream_gains = std::array<std::vector<rvec>, 3>;

struct water_fill_result
{
    rvec power;
    double level = 0.0;
};

// Exact active-set water filling over channel gains g_i (power gains, e.g.
// squared singular values): p_i = (level - noise / g_i)^+, sum p_i = budget.
inline water_fill_result water_fill(const rvec &gain, double budget, double noise)
{
    if (!(budget > 0.0) || !(noise > 0.0))
        throw domain_error("water_fill: budget and noise must be positive");
    std::vector<index_t> idx;
    for (index_t i = 0; i < gain.size(); ++i)
    {
        if (gain(i) < 0.0)
            throw domain_error("water_fill: negative gain");
        if (gain(i) > 0.0)
            idx.push_back(i);
    }
    if (idx.empty())
        throw domain_error("water_fill: all gains are zero");
    std::stable_sort(idx.begin(), idx.end(), [&](index_t a, index_t b) { return gain(a) > gain(b); });

    water_fill_result r;
    r.power = rvec::Zero(gain.size());
    double inv_sum = 0.0;
    std::vector<double> prefix(idx.size());
    for (size_t m = 0; m < idx.size(); ++m)
    {
        inv_sum += noise / gain(idx[m]);
        prefix[m] = inv_sum;
    }
    for (size_t m = idx.size(); m >= 1; --m)
    {
        const double level = (budget + prefix[m - 1]) / double(m);
        if (level - noise / gain(idx[m - 1]) > 0.0)
        {
            r.level = level;
            for (size_t i = 0; i < m; ++i)
                r.power(idx[i]) = level - noise / gain(idx[i]);
            return r;
        }
    }
    // unreachable: m = 1 always succeeds for budget > 0
    r.level = budget + noise / gain(idx[0]);
    r.power(idx[0]) = budget;
    return r;
}

enum class pa_scheme
{
    pa1, // single best polarization
    pa2, // equal split
    pa3  // water filling across and within polarizations
};

inline std::string to_string(pa_scheme p)
{
    switch (p)
    {
    case pa_scheme::pa1: return "pa1";
    case pa_scheme::pa2: return "pa2";
    case pa_scheme::pa3: return "pa3";
    }
    return "?";
}

inline pa_scheme pa_from_string(const std::string &s)
{
    if (s == "pa1")
        return pa_scheme::pa1;
    if (s == "pa2")
        return pa_scheme::pa2;
    if (s == "pa3")
        return pa_scheme::pa3;
    throw config_error("unknown power allocation '" + s + "'");
}

enum class second_layer_mode
{
    pooled,  // one water level per polarization across all its users
    per_user // equal split across users, water filling inside each user
};

inline second_layer_mode second_layer_from_string(const std::string &s)
{
    if (s == "pooled")
        return second_layer_mode::pooled;
    if (s == "per-user" || s == "per_user")
        return second_layer_mode::per_user;
    throw config_error("unknown second-layer mode '" + s + "'");
}

// polarization_power[p] is the power given to polarization p; stream_share
// holds each stream's fraction of it, so a stream transmits
// polarization_power[p] * stream_share[p][k](i).
struct power_allocation
{
    std::array<double, 3> polarization_power{0.0, 0.0, 0.0};
    std::array<std::vector<rvec>, 3> stream_share;
    std::array<double, 3> level{0.0, 0.0, 0.0};

    double stream_power(int p, size_t k, index_t i) const
    {
        return polarization_power[size_t(p)] * stream_share[size_t(p)][k](i);
    }
};

inline double polarization_energy(const std::vector<rvec> &users)
{
    double e = 0.0;
    for (const auto &g : users)
        e += g.squaredNorm();
    return e;
}

namespace detail
{

inline std::array<std::vector<rvec>, 3> empty_shares(const stream_gains &g)
{
    std::array<std::vector<rvec>, 3> s;
    for (int p = 0; p < 3; ++p)
        for (const auto &u : g[size_t(p)])
            s[size_t(p)].push_back(rvec::Zero(u.size()));
    return s;
}

inline rvec pooled_squares(const std::vector<rvec> &users)
{
    index_t n = 0;
    for (const auto &u : users)
        n += u.size();
    rvec all(n);
    index_t o = 0;
    for (const auto &u : users)
    {
        all.segment(o, u.size()) = u.array().square().matrix();
        o += u.size();
    }
    return all;
}

// Water-fill polarization p's streams with budget q; writes shares and level.
inline void fill_polarization(const std::vector<rvec> &users, double q, double noise, second_layer_mode mode,
                              std::vector<rvec> &share, double &level)
{
    if (mode == second_layer_mode::pooled)
    {
        const rvec g = pooled_squares(users);
        const water_fill_result w = water_fill(g, q, noise);
        level = w.level;
        index_t o = 0;
        for (size_t k = 0; k < users.size(); ++k)
        {
            share[k] = w.power.segment(o, users[k].size()) / q;
            o += users[k].size();
        }
        return;
    }
    size_t active = 0;
    for (const auto &u : users)
        active += (u.size() && u(0) > 0.0) ? 1 : 0;
    level = 0.0;
    for (size_t k = 0; k < users.size(); ++k)
    {
        if (!(users[k].size() && users[k](0) > 0.0))
            continue;
        const water_fill_result w = water_fill(users[k].array().square().matrix(), q / double(active), noise);
        share[k] = w.power / q;
        level = std::max(level, w.level);
    }
}

} // namespace detail

// The polarization with the largest effective-channel energy takes the whole
// budget (ties resolve x, y, z), water-filled over its streams.
inline power_allocation pa1_select(const stream_gains &g, double budget, double noise)
{
    int best = -1;
    double e_best = 0.0;
    for (int p = 0; p < 3; ++p)
    {
        const double e = polarization_energy(g[size_t(p)]);
        if (e > e_best)
        {
            e_best = e;
            best = p;
        }
    }
    if (best < 0)
        throw domain_error("pa1_select: all polarizations have zero gain");
    power_allocation a;
    a.stream_share = detail::empty_shares(g);
    a.polarization_power[size_t(best)] = budget;
    detail::fill_polarization(g[size_t(best)], budget, noise, second_layer_mode::pooled,
                              a.stream_share[size_t(best)], a.level[size_t(best)]);
    return a;
}

// A third of the budget per polarization, an equal share per served user,
// then an equal share per stream of that user.
inline power_allocation pa2_equal(const stream_gains &g, double budget)
{
    power_allocation a;
    a.stream_share = detail::empty_shares(g);
    for (int p = 0; p < 3; ++p)
    {
        a.polarization_power[size_t(p)] = budget / 3.0;
        const auto &users = g[size_t(p)];
        if (users.empty())
            continue;
        const double per_user = 1.0 / double(users.size());
        for (size_t k = 0; k < users.size(); ++k)
            if (users[k].size())
                a.stream_share[size_t(p)][k].setConstant(per_user / double(users[k].size()));
    }
    return a;
}

// First layer: water filling over the three polarization energies. Second
// layer: water filling over each polarization's streams with its share.
inline power_allocation pa3_two_layer(const stream_gains &g, double budget, double noise,
                                      second_layer_mode mode = second_layer_mode::pooled)
{
    rvec energy(3);
    for (int p = 0; p < 3; ++p)
        energy(p) = polarization_energy(g[size_t(p)]);
    const water_fill_result top = water_fill(energy, budget, noise);
    power_allocation a;
    a.stream_share = detail::empty_shares(g);
    for (int p = 0; p < 3; ++p)
    {
        a.polarization_power[size_t(p)] = top.power(p);
        if (top.power(p) > 0.0)
            detail::fill_polarization(g[size_t(p)], top.power(p), noise, mode, a.stream_share[size_t(p)],
                                      a.level[size_t(p)]);
    }
    return a;
}

inline power_allocation allocate(pa_scheme s, const stream_gains &g, double budget, double noise,
                                 second_layer_mode mode = second_layer_mode::pooled)
{
    switch (s)
    {
    case pa_scheme::pa1: return pa1_select(g, budget, noise);
    case pa_scheme::pa2: return pa2_equal(g, budget);
    case pa_scheme::pa3: return pa3_two_layer(g, budget, noise, mode);
    }
    throw config_error("unknown power allocation");
}

} // namespace hmimos
