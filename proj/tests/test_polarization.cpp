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


#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hmimos;
using Catch::Matchers::WithinAbs;

TEST_CASE("circular xy excitation has a z normal of 2")
{
    const polarized_excitation e({1.0, 1.0, 0.0}, {0.0, pi / 2, 0.0});
    const auto d = describe(e);
    CHECK((d.normal - Eigen::Vector3d(0, 0, 2)).norm() < 1e-15);
    CHECK((d.pseudovector - Eigen::Vector3d(0, 0, 2)).norm() < 1e-15);
}

TEST_CASE("linear excitation has a degenerate ellipse")
{
    const polarized_excitation e({0.3, 0.8, 0.5}, {1.1, 1.1, 1.1});
    const auto d = describe(e);
    CHECK(d.normal.norm() < 1e-15);
    CHECK(d.pseudovector.norm() < 1e-15);
}

TEST_CASE("pseudovector equals the plane normal and is perpendicular to the field")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> amp(0.0, 1.0), ph(-10.0, 10.0);
    for (int t = 0; t < 200; ++t)
    {
        const polarized_excitation e({amp(rng), amp(rng), amp(rng)}, {ph(rng), ph(rng), ph(rng)});
        const auto d = describe(e);
        CHECK((d.pseudovector - d.normal).norm() < 1e-14);
        const Eigen::Vector3cd f = e.field();
        CHECK(std::abs(d.pseudovector.dot(f.real())) < 1e-14);
        CHECK(std::abs(d.pseudovector.dot(f.imag())) < 1e-14);
    }
}

TEST_CASE("spectral density is Hermitian with squared amplitudes on the diagonal")
{
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> amp(0.0, 1.0), ph(0.0, 6.0);
    for (int t = 0; t < 100; ++t)
    {
        const polarized_excitation e({amp(rng), amp(rng), amp(rng)}, {ph(rng), ph(rng), ph(rng)});
        const auto d = describe(e);
        CHECK((d.density - d.density.adjoint()).norm() < 1e-15);
        for (int j = 0; j < 3; ++j)
        {
            CHECK(std::abs(d.density(j, j).imag()) < 1e-15);
            CHECK_THAT(d.density(j, j).real(), WithinAbs(e.amplitude[size_t(j)] * e.amplitude[size_t(j)], 1e-15));
        }
        // entry (i, j) carries the phase difference theta_i - theta_j
        const double dt = e.phase[0] - e.phase[1];
        CHECK(std::abs(d.density(0, 1) - std::polar(e.amplitude[0] * e.amplitude[1], dt)) < 1e-14);
    }
}

TEST_CASE("phases wrap into one turn")
{
    const polarized_excitation e({1.0, 1.0, 1.0}, {-0.5, 2.0 * pi, 7.0});
    for (double t : e.phase)
    {
        CHECK(t >= 0.0);
        CHECK(t < 2.0 * pi);
    }
    CHECK_THAT(e.phase[0], WithinAbs(2.0 * pi - 0.5, 1e-14));
    CHECK_THAT(e.phase[1], WithinAbs(0.0, 1e-14));
}

TEST_CASE("amplitudes outside the unit interval are rejected")
{
    CHECK_THROWS_AS(polarized_excitation({1.5, 0.0, 0.0}, {0, 0, 0}), domain_error);
    CHECK_THROWS_AS(polarized_excitation({-0.1, 0.0, 0.0}, {0, 0, 0}), domain_error);
}

TEST_CASE("phase configuration is block diagonal with bounded entries")
{
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> amp(0.0, 1.0), ph(0.0, 6.0);
    std::vector<polarized_excitation> ex;
    for (int n = 0; n < 5; ++n)
        ex.emplace_back(std::array<double, 3>{amp(rng), amp(rng), amp(rng)},
                        std::array<double, 3>{ph(rng), ph(rng), ph(rng)});
    const auto cfg = phase_config::from_excitations(ex);
    const cmat M = cfg.matrix();
    REQUIRE(M.rows() == 15);
    for (index_t i = 0; i < 15; ++i)
        for (index_t j = 0; j < 15; ++j)
        {
            if (i != j)
                CHECK(M(i, j) == cplx(0.0, 0.0));
            else
                CHECK(std::abs(M(i, i)) <= 1.0);
        }
    CHECK(cfg.block(2)(1, 1) == ex[2].field()(1));
    std::vector<Eigen::Vector3cd> bad(1, Eigen::Vector3cd::Constant(cplx(1.0, 1.0)));
    CHECK_THROWS_AS(phase_config(bad), domain_error);
}
