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

#include "geometry.hpp"
#include "parallel.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace hmimos
{

using dyad = Eigen::Matrix3cd;

inline constexpr double coincidence_eps = 1e-12;

inline cplx scalar_green(const vec3 &r, const vec3 &rp, double k0)
{
    const double R = (r - rp).norm();
    if (R <= coincidence_eps)
        throw singularity_error("scalar_green: coincident points");
    return std::exp(cplx(0.0, k0 * R)) / (4.0 * pi * R);
}

inline std::pair<cplx, cplx> radial_coeffs(double kr)
{
    if (!(kr > 0.0))
        throw domain_error("radial_coeffs: argument must be positive");
    const double a = 1.0 / kr;
    const cplx c1(1.0 - a * a, a);
    const cplx c2(3.0 * a * a - 1.0, -3.0 * a);
    return {c1, c2};
}

inline double sinc(double x)
{
    if (std::abs(x) < 1e-8)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// Point-to-point free-space dyadic (c1 I + c2 rr) g.
inline dyad dyadic_green(const vec3 &r, const vec3 &rp, double k0)
{
    const vec3 v = r - rp;
    const double R = v.norm();
    if (R <= coincidence_eps)
        throw singularity_error("dyadic_green: coincident points");
    const vec3 u = v / R;
    const auto [c1, c2] = radial_coeffs(k0 * R);
    const cplx g = std::exp(cplx(0.0, k0 * R)) / (4.0 * pi * R);
    dyad D = (c2 * g) * (u * u.transpose()).cast<cplx>();
    D.diagonal().array() += c1 * g;
    return D;
}

struct patch_dims
{
    double dx = 0.0, dy = 0.0;
    double area() const { return dx * dy; }
};

// Patch-to-patch block: aperture-integrated dyadic, sinc taper from the
// transmit patch size, receive patch contributing its area.
inline dyad channel_block(const vec3 &tx, const vec3 &rx, const patch_dims &ts, double rx_area, double k0)
{
    if (!(ts.dx > 0.0) || !(ts.dy > 0.0) || !(rx_area > 0.0))
        throw domain_error("channel_block: patch areas must be positive");
    const vec3 v = rx - tx;
    const double R = v.norm();
    if (R <= coincidence_eps)
        throw singularity_error("channel_block: coincident patch centers");
    const double taper = sinc(k0 * v.x() * ts.dx / (2.0 * R)) * sinc(k0 * v.y() * ts.dy / (2.0 * R));
    const double scale = ts.area() * rx_area * taper;
    dyad D = dyadic_green(rx, tx, k0);
    return D * scale;
}

enum pol : int
{
    px = 0,
    py = 1,
    pz = 2
};

inline const char *pol_name(int p)
{
    static const char *n[3] = {"x", "y", "z"};
    return n[p];
}

// 3Nr x 3Ns channel. Row (p, m) sits at p*Nr + m with m running over all
// users' receive patches in user order; column (q, n) at q*Ns + n.
class polarized_channel
{
  public:
    polarized_channel() = default;
    polarized_channel(cmat H, index_t ns, std::vector<index_t> user_rows)
        : H_(std::move(H)), ns_(ns), rows_(std::move(user_rows))
    {
        offset_.push_back(0);
        for (auto r : rows_)
            offset_.push_back(offset_.back() + r);
        if (H_.rows() != 3 * offset_.back() || H_.cols() != 3 * ns_)
            throw dimension_error("polarized_channel: shape does not match counts");
    }

    const cmat &stacked() const { return H_; }
    index_t tx_count() const { return ns_; }
    index_t rx_count() const { return offset_.back(); }
    size_t users() const { return rows_.size(); }
    index_t user_rows(size_t k) const { return rows_.at(k); }
    index_t user_offset(size_t k) const { return offset_.at(k); }

    // H_pq over all users: Nr x Ns
    auto block(int p, int q) const { return H_.block(p * rx_count(), q * ns_, rx_count(), ns_); }

    // H_pq of user k: Nr_k x Ns
    auto block(int p, int q, size_t k) const
    {
        return H_.block(p * rx_count() + offset_.at(k), q * ns_, rows_.at(k), ns_);
    }

    // User k's 3Nr_k x 3Ns channel, polarization-major within the user.
    cmat user(size_t k) const
    {
        const index_t r = rows_.at(k);
        cmat U(3 * r, 3 * ns_);
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q)
                U.block(p * r, q * ns_, r, ns_) = block(p, q, k);
        return U;
    }

    // Dual-polarized (x, y) sub-channel: 2Nr x 2Ns
    cmat xy_subchannel() const { return H_.block(0, 0, 2 * rx_count(), 2 * ns_); }

    // Stacked channel with the co-polarized blocks zeroed.
    cmat cross_part() const
    {
        cmat X = H_;
        for (int p = 0; p < 3; ++p)
            X.block(p * rx_count(), p * ns_, rx_count(), ns_).setZero();
        return X;
    }

    void scale(double s) { H_ *= s; }

  private:
    cmat H_;
    index_t ns_ = 0;
    std::vector<index_t> rows_;
    std::vector<index_t> offset_{};
};

inline polarized_channel assemble_channel(const scenario &sc)
{
    sc.validate();
    const double k0 = sc.wavenumber();
    const std::vector<vec3> tx = patch_centers(sc.tx);
    const patch_dims ts{sc.tx.dx, sc.tx.dy};

    std::vector<vec3> rx;
    std::vector<double> rx_area;
    std::vector<index_t> rows;
    for (size_t k = 0; k < sc.users.size(); ++k)
    {
        const surface_spec s = sc.rx_surface(k);
        const auto c = patch_centers(s);
        rx.insert(rx.end(), c.begin(), c.end());
        rx_area.insert(rx_area.end(), c.size(), s.patch_area());
        rows.push_back(index_t(c.size()));
    }

    const index_t nr = index_t(rx.size()), ns = index_t(tx.size());
    cmat H(3 * nr, 3 * ns);
    parallel_for(long(nr), [&](long m) {
        for (index_t n = 0; n < ns; ++n)
        {
            const dyad B = channel_block(tx[size_t(n)], rx[size_t(m)], ts, rx_area[size_t(m)], k0);
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q)
                    H(p * nr + m, q * ns + n) = B(p, q);
        }
    });
    return polarized_channel(std::move(H), ns, std::move(rows));
}

} // namespace hmimos
