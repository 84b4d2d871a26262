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

#include <cmath>

namespace hmimos
{

// Im of the free-space xx dyadic for in-plane separation d with x-offset xo.
// Six-term closed form; d = 0 returns the limit k0/(6 pi).
inline double im_green0_xx(double d, double xo, double k0)
{
    if (d < 0.0)
        throw domain_error("im_green0_xx: negative distance");
    if (d == 0.0)
        return k0 / (6.0 * pi);
    const double kd = k0 * d;
    if (kd < 1e-2)
    {
        // Series in kd; the closed form cancels like eps / (kd)^2 here.
        const double t = kd * kd, u = (xo / d) * (xo / d);
        const double a = 2.0 / 3.0 - t * (2.0 / 15.0) + t * t / 140.0;
        const double b = t / 15.0 - t * t / 210.0;
        return k0 / (4.0 * pi) * (a + u * b);
    }
    const double s = std::sin(kd), c = std::cos(kd), f = 4.0 * pi;
    const double x2 = xo * xo;
    return s / (f * d) + c / (f * k0 * d * d) - s / (f * k0 * k0 * d * d * d)
           - x2 * s / (f * d * d * d) - 3.0 * x2 * c / (f * k0 * std::pow(d, 4))
           + 3.0 * x2 * s / (f * k0 * k0 * std::pow(d, 5));
}

// Image-source xx term at offset (xo, yo, zo). The image dyad carries -xx,
// so this is the negated free-space closed form at the image distance.
inline double im_green_image_xx(double xo, double yo, double zo, double k0)
{
    const double r = std::sqrt(xo * xo + yo * yo + zo * zo);
    if (!(r > 0.0))
        throw domain_error("im_green_image_xx: zero image distance");
    return -im_green0_xx(r, xo, k0);
}

// Im[(c1 + c2 v_p^2 / |v|^2) g] for separation v, any axis p.
inline double im_green_pp(const vec3 &v, int p, double k0)
{
    const double d = v.norm();
    if (d == 0.0)
        return k0 / (6.0 * pi);
    const double vp = v(p);
    return im_green0_xx(d, vp, k0);
}

struct correlation_matrix
{
    rmat raw;
    int polarization = px;

    double diagonal() const { return raw.rows() ? raw(0, 0) : 0.0; }
    rmat normalized() const { return raw / diagonal(); }
};

// Transmit-side correlation for co-polarization p of patches at (x, y) with
// an image plane at height zo. Free-space plus image term, image dyad sign
// pattern (-, -, +) over (x, y, z).
inline correlation_matrix transmit_correlation(const std::vector<vec3> &centers, double zo, double k0, int p = px)
{
    if (!(zo > 0.0))
        throw domain_error("transmit_correlation: image distance must be positive");
    static const double image_sign[3] = {-1.0, -1.0, 1.0};
    const index_t n = index_t(centers.size());
    correlation_matrix R;
    R.polarization = p;
    R.raw.resize(n, n);
    parallel_for(long(n), [&](long i) {
        for (index_t j = 0; j < n; ++j)
        {
            const vec3 &a = centers[size_t(i)], &b = centers[size_t(j)];
            const vec3 sep(a.x() - b.x(), a.y() - b.y(), 0.0);
            const vec3 img(a.x() - b.x(), a.y() - b.y(), zo);
            R.raw(i, j) = im_green_pp(sep, p, k0) + image_sign[p] * im_green_pp(img, p, k0);
        }
    });
    return R;
}

inline correlation_matrix transmit_correlation(const surface_spec &s, double zo, double k0, int p = px)
{
    return transmit_correlation(patch_centers(s), zo, k0, p);
}

template <typename Derived>
double dof(const Eigen::MatrixBase<Derived> &R)
{
    const double fro = R.norm();
    if (!(fro > 0.0))
        throw domain_error("dof: zero matrix");
    const double tr = std::abs(R.trace());
    return (tr / fro) * (tr / fro);
}

inline double dof(const correlation_matrix &R) { return dof(R.raw); }

// DoF of the Gram matrix H^H H, evaluated on the smaller Gram side.
inline double channel_dof(const cmat &H)
{
    const cmat G = H.rows() <= H.cols() ? cmat(H * H.adjoint()) : cmat(H.adjoint() * H);
    return dof(G);
}

enum class dof_mode
{
    transmit, // transmit correlation at the user's distance
    channel   // Gram matrix of the full tri-polarized channel
};

inline dof_mode dof_mode_from_string(const std::string &s)
{
    if (s == "transmit")
        return dof_mode::transmit;
    if (s == "channel")
        return dof_mode::channel;
    throw config_error("unknown dof mode '" + s + "'");
}

// DoF of a link between identical transmit and receive surfaces at distance z.
inline double link_dof(const surface_spec &tx, double z, double wavelength, dof_mode mode, int p = px)
{
    const double k0 = 2.0 * pi / wavelength;
    if (mode == dof_mode::transmit)
        return dof(transmit_correlation(tx, z, k0, p));
    scenario sc;
    sc.wavelength = wavelength;
    sc.tx = tx;
    user_spec u;
    u.surface = tx;
    u.surface.center = vec3::Zero();
    u.distance = z;
    sc.users.push_back(u);
    return channel_dof(assemble_channel(sc).stacked());
}

} // namespace hmimos
