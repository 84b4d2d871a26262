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
using Catch::Matchers::WithinRel;

TEST_CASE("pinv of identity is identity")
{
    const cmat I = cmat::Identity(3, 3);
    CHECK((pinv(I) - I).norm() < 1e-14);
}

TEST_CASE("pinv of diag(2 0) zeroes the null direction")
{
    cmat D = cmat::Zero(2, 2);
    D(0, 0) = 2.0;
    const cmat P = pinv(D, 1e-12);
    CHECK(std::abs(P(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(P(1, 1)) == 0.0);
    CHECK(std::abs(P(0, 1)) == 0.0);
}

TEST_CASE("pinv is a left inverse of a full column rank matrix")
{
    std::mt19937_64 rng(11);
    const cmat A = testing::random_cmat(rng, 6, 4);
    CHECK((pinv(A) * A - cmat::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("pinv satisfies the Penrose conditions")
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t)
    {
        const cmat A = testing::random_cmat(rng, 3 + t % 4, 2 + t % 5);
        const cmat P = pinv(A);
        CHECK(rel_residual(A * P * A - A, A.norm()) < 1e-10);
        CHECK(rel_residual(P * A * P - P, P.norm()) < 1e-10);
        CHECK((A * P - (A * P).adjoint()).norm() < 1e-10);
        CHECK((P * A - (P * A).adjoint()).norm() < 1e-10);
    }
}

TEST_CASE("pinv rejects an empty matrix")
{
    CHECK_THROWS_AS(pinv(cmat(0, 3)), dimension_error);
}

TEST_CASE("null projector of an axis row keeps the other axis")
{
    cmat A(1, 2);
    A << 1.0, 0.0;
    const cmat N = null_projector(A);
    CHECK(std::abs(N(0, 0)) < 1e-15);
    CHECK(std::abs(N(1, 1) - 1.0) < 1e-15);
    CHECK(std::abs(N(0, 1)) < 1e-15);
}

TEST_CASE("null projector of a zero matrix is the identity")
{
    const cmat N = null_projector(cmat::Zero(3, 5));
    CHECK((N - cmat::Identity(5, 5)).norm() == 0.0);
}

TEST_CASE("null projector annihilates and is an orthogonal projector")
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t)
    {
        const cmat A = testing::random_cmat(rng, 4, 8);
        const cmat N = null_projector(A);
        CHECK((A * N).norm() / A.norm() < 1e-10);
        CHECK((N * N - N).norm() < 1e-10);
        CHECK((N - N.adjoint()).norm() < 1e-10);
        CHECK(std::abs(N.trace().real() - 4.0) < 1e-10);
    }
}

TEST_CASE("svd partition of a diagonal")
{
    cmat D = cmat::Zero(2, 2);
    D(0, 0) = 3.0;
    D(1, 1) = 2.0;
    const auto s = svd_partition(D);
    REQUIRE(s.singular.size() == 2);
    CHECK_THAT(s.singular(0), WithinAbs(3.0, 1e-14));
    CHECK_THAT(s.singular(1), WithinAbs(2.0, 1e-14));
    CHECK(s.V0.cols() == 0);
    CHECK(s.rank == 2);
}

TEST_CASE("svd partition of an identity block finds the trailing null space")
{
    cmat A = cmat::Zero(2, 4);
    A(0, 0) = 1.0;
    A(1, 1) = 1.0;
    const auto s = svd_partition(A);
    REQUIRE(s.V0.cols() == 2);
    // the null basis lives on coordinates 3 and 4 only
    CHECK(s.V0.topRows(2).norm() < 1e-14);
    CHECK((s.V0.adjoint() * s.V0 - cmat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("svd partition detects rank by composition")
{
    std::mt19937_64 rng(14);
    const cmat A = testing::random_cmat(rng, 5, 3) * testing::random_cmat(rng, 3, 8);
    const auto s = svd_partition(A);
    CHECK(s.rank == 3);
    CHECK(s.V1.cols() == 3);
    CHECK(s.V0.cols() == 5);
    CHECK((A * s.V0).norm() < 1e-10 * A.norm());
}

TEST_CASE("svd partition reconstructs the input")
{
    std::mt19937_64 rng(15);
    for (int t = 0; t < 20; ++t)
    {
        const index_t r = 2 + t % 5, c = 2 + (t * 3) % 7;
        const cmat A = testing::random_cmat(rng, r, c);
        const auto s = svd_partition(A);
        cmat V(c, c);
        V << s.V1, s.V0;
        const index_t m = std::min(r, c);
        cmat S = cmat::Zero(r, c);
        for (index_t i = 0; i < m; ++i)
            S(i, i) = s.singular(i);
        CHECK(rel_residual(s.U * S * V.adjoint() - A, A.norm()) < 1e-10);
        CHECK((V.adjoint() * V - cmat::Identity(c, c)).norm() < 1e-10);
        for (index_t i = 1; i < s.singular.size(); ++i)
            CHECK(s.singular(i) <= s.singular(i - 1));
    }
}

TEST_CASE("svd partition fixes the sign of left singular vectors")
{
    std::mt19937_64 rng(16);
    const cmat A = testing::random_cmat(rng, 4, 6);
    const auto a = svd_partition(A);
    const auto b = svd_partition(cplx(0.0, 1.0) * A);
    for (index_t j = 0; j < a.U.cols(); ++j)
    {
        index_t i = 0;
        while (std::abs(a.U(i, j)) < 1e-300)
            ++i;
        CHECK(std::abs(a.U(i, j).imag()) < 1e-14);
        CHECK(a.U(i, j).real() >= 0.0);
    }
    // scaling by a unit phase leaves the fixed-phase U unchanged
    CHECK((a.U - b.U).norm() < 1e-10);
}
