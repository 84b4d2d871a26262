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

#include <array>
#include <cmath>
#include <vector>

namespace hmimos
{

inline double wrap_phase(double t)
{
    double w = std::fmod(t, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    return w;
}

// One patch's three-axis excitation E_j exp(i theta_j).
struct polarized_excitation
{
    std::array<double, 3> amplitude{0.0, 0.0, 0.0};
    std::array<double, 3> phase{0.0, 0.0, 0.0};

    polarized_excitation() = default;
    polarized_excitation(std::array<double, 3> a, std::array<double, 3> t) : amplitude(a)
    {
        for (int j = 0; j < 3; ++j)
        {
            if (!(a[j] >= 0.0 && a[j] <= 1.0))
                throw domain_error("excitation amplitude outside [0, 1]");
            phase[j] = wrap_phase(t[j]);
        }
    }

    Eigen::Vector3cd field() const
    {
        Eigen::Vector3cd e;
        for (int j = 0; j < 3; ++j)
            e(j) = std::polar(amplitude[j], phase[j]);
        return e;
    }
};

struct polarization_descriptors
{
    Eigen::Vector3d normal;      // plane normal from amplitudes and phase differences
    Eigen::Matrix3cd density;    // spectral density tensor
    Eigen::Vector3d pseudovector;
};

inline polarization_descriptors describe(const polarized_excitation &exc)
{
    const auto &E = exc.amplitude;
    const auto &t = exc.phase;
    polarization_descriptors d;
    d.normal << -2.0 * E[1] * E[2] * std::sin(t[1] - t[2]),
        -2.0 * E[2] * E[0] * std::sin(t[2] - t[0]),
        -2.0 * E[0] * E[1] * std::sin(t[0] - t[1]);

    const Eigen::Vector3cd e = exc.field();
    d.density = e * e.adjoint();

    const double l7 = -2.0 * std::imag(e(1) * std::conj(e(2)));
    const double l5 = -2.0 * std::imag(e(0) * std::conj(e(2)));
    const double l2 = -2.0 * std::imag(e(0) * std::conj(e(1)));
    d.pseudovector << l7, -l5, l2;
    return d;
}

// Analog per-patch configuration. Carried with a scenario, never optimized.
class phase_config
{
  public:
    phase_config() = default;
    explicit phase_config(std::vector<Eigen::Vector3cd> diag) : diag_(std::move(diag))
    {
        for (const auto &d : diag_)
            for (int j = 0; j < 3; ++j)
                if (std::abs(d(j)) > 1.0 + 1e-12)
                    throw domain_error("phase configuration entry exceeds unit modulus");
    }

    static phase_config from_excitations(const std::vector<polarized_excitation> &ex)
    {
        std::vector<Eigen::Vector3cd> d;
        d.reserve(ex.size());
        for (const auto &e : ex)
            d.push_back(e.field());
        return phase_config(std::move(d));
    }

    static phase_config identity(size_t n) { return phase_config(std::vector<Eigen::Vector3cd>(n, Eigen::Vector3cd::Ones())); }

    size_t size() const { return diag_.size(); }

    Eigen::Matrix3cd block(size_t n) const { return diag_.at(n).asDiagonal(); }

    // Patch-major 3N x 3N block-diagonal matrix.
    cmat matrix() const
    {
        const index_t n = index_t(diag_.size());
        cmat M = cmat::Zero(3 * n, 3 * n);
        for (index_t i = 0; i < n; ++i)
            for (int j = 0; j < 3; ++j)
                M(3 * i + j, 3 * i + j) = diag_[size_t(i)](j);
        return M;
    }

  private:
    std::vector<Eigen::Vector3cd> diag_;
};

} // namespace hmimos
