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
#include <cmath>
#include <cstdlib>
#include <string>
#include <tuple>
#include <vector>

namespace hmimos
{

using vec3 = Eigen::Vector3d;

enum class layout
{
    square,
    rectangle,
    circle
};

enum class surface_role
{
    transmit,
    receive
};

inline std::string to_string(layout l)
{
    switch (l)
    {
    case layout::square: return "square";
    case layout::rectangle: return "rectangle";
    case layout::circle: return "circle";
    }
    return "?";
}

inline layout layout_from_string(const std::string &s)
{
    if (s == "square")
        return layout::square;
    if (s == "rectangle" || s == "grid")
        return layout::rectangle;
    if (s == "circle")
        return layout::circle;
    throw config_error("unknown layout '" + s + "'");
}

struct surface_spec
{
    layout shape = layout::square;
    int nx = 1, ny = 1;   // grid layouts
    int count = 0;        // circle: patches to keep (0 keeps all inside radius)
    double radius = 0.0;  // circle: clip radius (0 means unbounded)
    double dx = 0.4, dy = 0.4;
    vec3 center = vec3::Zero();
    surface_role role = surface_role::transmit;

    double patch_area() const { return dx * dy; }

    void validate() const
    {
        if (!(dx > 0.0) || !(dy > 0.0))
            throw geometry_error("patch spacing must be positive");
        if (shape == layout::circle)
        {
            if (count < 0 || radius < 0.0 || (count == 0 && radius == 0.0))
                throw geometry_error("circle layout needs a patch count or a radius");
        }
        else if (nx < 1 || ny < 1)
            throw geometry_error("grid layout needs at least one patch per axis");
        if (shape == layout::square && nx != ny)
            throw geometry_error("square layout needs nx == ny");
    }
};

// Grid with nx*ny patches of size dx*dy, centered on c.
inline surface_spec grid_surface(int nx, int ny, double dx, double dy, const vec3 &c = vec3::Zero(),
                                 surface_role role = surface_role::transmit)
{
    surface_spec s;
    s.shape = (nx == ny && dx == dy) ? layout::square : layout::rectangle;
    s.nx = nx;
    s.ny = ny;
    s.dx = dx;
    s.dy = dy;
    s.center = c;
    s.role = role;
    return s;
}

// N patches filling an lx*ly aperture. N is factored as nx*ny with nx/ny as
// close as possible to lx/ly; spacings are lx/nx and ly/ny.
inline surface_spec fill_aperture(int n, double lx, double ly, const vec3 &c = vec3::Zero())
{
    if (n < 1 || !(lx > 0.0) || !(ly > 0.0))
        throw geometry_error("fill_aperture: bad size");
    int best_a = 1;
    double best_e = -1.0;
    for (int a = 1; a <= n; ++a)
    {
        if (n % a)
            continue;
        const int b = n / a;
        const double e = std::abs(std::log((double(a) / b) / (lx / ly)));
        if (best_e < 0.0 || e < best_e - 1e-12)
        {
            best_e = e;
            best_a = a;
        }
    }
    const int nx = best_a, ny = n / best_a;
    return grid_surface(nx, ny, lx / nx, ly / ny, c);
}

inline int patch_count(const surface_spec &s);

namespace detail
{

struct lattice_point
{
    long i, j;
    double r2;
};

inline std::vector<lattice_point> circle_lattice(const surface_spec &s)
{
    double reach = s.radius;
    if (reach == 0.0)
        reach = 2.0 * std::sqrt(double(s.count) * s.dx * s.dy / pi) + 2.0 * std::max(s.dx, s.dy);
    const long ni = long(std::ceil(reach / s.dx)), nj = long(std::ceil(reach / s.dy));
    const bool iso = s.dx == s.dy;
    std::vector<lattice_point> pts;
    for (long j = -nj; j <= nj; ++j)
        for (long i = -ni; i <= ni; ++i)
        {
            const double x = double(i) * s.dx, y = double(j) * s.dy;
            const double r2 = iso ? double(i * i + j * j) * s.dx * s.dx : x * x + y * y;
            if (s.radius > 0.0 && r2 > s.radius * s.radius * (1.0 + 1e-12))
                continue;
            pts.push_back({i, j, r2});
        }
    // closest first; ties broken by (y, x) so the order is reproducible
    std::sort(pts.begin(), pts.end(), [iso](const lattice_point &a, const lattice_point &b) {
        if (iso)
        {
            const long ka = a.i * a.i + a.j * a.j, kb = b.i * b.i + b.j * b.j;
            if (ka != kb)
                return ka < kb;
        }
        else if (a.r2 != b.r2)
            return a.r2 < b.r2;
        return std::tie(a.j, a.i) < std::tie(b.j, b.i);
    });
    if (s.count > 0)
    {
        if (pts.size() < size_t(s.count))
            throw geometry_error("circle layout cannot host " + std::to_string(s.count) + " patches at this spacing");
        pts.resize(size_t(s.count));
    }
    return pts;
}

} // namespace detail

inline std::vector<vec3> patch_centers(const surface_spec &s)
{
    s.validate();
    std::vector<vec3> out;
    if (s.shape == layout::circle)
    {
        for (const auto &p : detail::circle_lattice(s))
            out.push_back(s.center + vec3(double(p.i) * s.dx, double(p.j) * s.dy, 0.0));
        return out;
    }
    out.reserve(size_t(s.nx) * size_t(s.ny));
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i)
            out.push_back(s.center + vec3((i - 0.5 * (s.nx - 1)) * s.dx, (j - 0.5 * (s.ny - 1)) * s.dy, 0.0));
    return out;
}

inline int patch_count(const surface_spec &s)
{
    if (s.shape == layout::circle)
        return s.count > 0 ? s.count : int(detail::circle_lattice(s).size());
    return s.nx * s.ny;
}

struct user_spec
{
    surface_spec surface; // lateral offset taken from surface.center.x/y
    double distance = 1.0;
};

struct scenario
{
    double wavelength = 1.0;
    surface_spec tx;
    std::vector<user_spec> users;
    double noise_power = 1.0;
    double total_power = 1.0;

    double wavenumber() const { return 2.0 * pi / wavelength; }

    // Receive surface of user k placed parallel to the transmitter at its distance.
    surface_spec rx_surface(size_t k) const
    {
        surface_spec s = users.at(k).surface;
        s.role = surface_role::receive;
        s.center = vec3(tx.center.x() + s.center.x(), tx.center.y() + s.center.y(),
                        tx.center.z() + users.at(k).distance);
        return s;
    }

    int tx_count() const { return patch_count(tx); }

    int rx_count() const
    {
        int n = 0;
        for (size_t k = 0; k < users.size(); ++k)
            n += patch_count(users[k].surface);
        return n;
    }

    void validate() const
    {
        if (!(wavelength > 0.0))
            throw config_error("wavelength must be positive");
        if (users.empty())
            throw config_error("scenario has no users");
        if (!(noise_power > 0.0) || !(total_power > 0.0))
            throw config_error("noise and total power must be positive");
        tx.validate();
        for (const auto &u : users)
        {
            if (!(u.distance > 0.0))
                throw config_error("user distance must be positive");
            u.surface.validate();
        }
    }
};

struct near_field_report
{
    double nf_bound = 0.0;              // largest per-user bound
    std::vector<double> user_bound;     // per user, from its own receive surface
    std::vector<bool> in_near_field;
    double patch_limit = 0.0;           // tightest over users
    bool patch_ok = false;
};

// Square-grid expansion of the Fraunhofer distance for a transmitter of ns
// patches and a receiver of nr patches.
inline double near_field_bound(int ns, double ds, int nr, double dr, double wavelength)
{
    return (4.0 * ns * ds * ds + 4.0 * nr * dr * dr + 8.0 * std::sqrt(double(ns) * nr) * ds * dr) / wavelength;
}

inline near_field_report validate_near_field(const scenario &sc, double patch_factor = 10.0)
{
    near_field_report r;
    r.patch_limit = -1.0;
    const int ns = sc.tx_count();
    for (const auto &u : sc.users)
    {
        const double b = near_field_bound(ns, sc.tx.dx, patch_count(u.surface), u.surface.dx, sc.wavelength);
        r.user_bound.push_back(b);
        r.in_near_field.push_back(u.distance <= b);
        r.nf_bound = std::max(r.nf_bound, b);
        const double lim = 2.0 * std::sqrt(sc.wavelength * u.distance) / patch_factor;
        r.patch_limit = r.patch_limit < 0.0 ? lim : std::min(r.patch_limit, lim);
    }
    r.patch_ok = sc.tx.dx <= r.patch_limit;
    return r;
}

} // namespace hmimos
