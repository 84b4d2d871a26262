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

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hmimos
{

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;
using index_t = Eigen::Index;

inline constexpr double default_tol = 1e-10;
inline constexpr double pi = 3.14159265358979323846;

struct error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};
struct dimension_error : error
{
    using error::error;
};
struct domain_error : error
{
    using error::error;
};
struct singularity_error : error
{
    using error::error;
};
struct geometry_error : error
{
    using error::error;
};
struct config_error : error
{
    using error::error;
};
struct capacity_error : error
{
    using error::error;
};

// Raised when a block the precoder must invert has collapsed; block() names it.
struct degeneracy_error : error
{
    degeneracy_error(std::string block_name, const std::string &what)
        : error(what), block_(std::move(block_name)) {}
    const std::string &block() const noexcept { return block_; }

  private:
    std::string block_;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &A)
{
    return A.allFinite();
}

struct svd_parts
{
    cmat U;        // left singular vectors, full
    rvec singular; // descending
    cmat V1;       // row-space basis, columns
    cmat V0;       // null-space basis, columns
    index_t rank = 0;
};

namespace detail
{

inline index_t numeric_rank(const rvec &s, double tol)
{
    if (s.size() == 0 || !(s(0) > 0.0))
        return 0;
    const double cut = tol * s(0);
    index_t r = 0;
    while (r < s.size() && s(r) > cut)
        ++r;
    return r;
}

// First nonzero entry of each left singular vector made real nonnegative;
// the matching right vector takes the same phase so U S V^H is unchanged.
inline void fix_phases(cmat &U, cmat &V, index_t n)
{
    for (index_t j = 0; j < n; ++j)
    {
        index_t i = 0;
        while (i < U.rows() && std::abs(U(i, j)) <= 1e-14)
            ++i;
        if (i == U.rows())
            continue;
        const cplx ph = std::conj(U(i, j)) / std::abs(U(i, j));
        U.col(j) *= ph;
        V.col(j) *= ph;
        U(i, j) = cplx(U(i, j).real(), 0.0);
    }
}

} // namespace detail

inline svd_parts svd_partition(const cmat &A, double tol = default_tol)
{
    if (A.size() == 0)
        throw dimension_error("svd_partition: empty matrix");
    if (tol < 0.0)
        throw domain_error("svd_partition: negative tolerance");

    Eigen::BDCSVD<cmat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd_parts out;
    out.U = svd.matrixU();
    cmat V = svd.matrixV();
    out.singular = svd.singularValues();
    detail::fix_phases(out.U, V, out.singular.size());
    out.rank = detail::numeric_rank(out.singular, tol);
    out.V1 = V.leftCols(out.rank);
    out.V0 = V.rightCols(V.cols() - out.rank);
    return out;
}

inline rvec singular_values(const cmat &A)
{
    if (A.size() == 0)
        return rvec();
    Eigen::BDCSVD<cmat> svd(A);
    return svd.singularValues();
}

inline cmat pinv(const cmat &A, double tol = default_tol)
{
    if (A.size() == 0)
        throw dimension_error("pinv: empty matrix");
    if (tol < 0.0)
        throw domain_error("pinv: negative tolerance");

    Eigen::BDCSVD<cmat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const rvec &s = svd.singularValues();
    const index_t r = detail::numeric_rank(s, tol);
    if (r == 0)
        return cmat::Zero(A.cols(), A.rows());
    const cmat &U = svd.matrixU();
    const cmat &V = svd.matrixV();
    cmat Vs = V.leftCols(r);
    for (index_t j = 0; j < r; ++j)
        Vs.col(j) /= s(j);
    return Vs * U.leftCols(r).adjoint();
}

// Projector onto null(A), built from an orthonormal SVD basis. The algebraic
// form I - pinv(A) A drifts by ~1e-8 on the ill-conditioned products the
// precoder feeds in.
inline cmat null_projector(const cmat &A, double tol = default_tol)
{
    if (A.cols() == 0)
        throw dimension_error("null_projector: matrix has no columns");
    if (A.rows() == 0)
        return cmat::Identity(A.cols(), A.cols());
    const svd_parts p = svd_partition(A, tol);
    cmat N = p.V0 * p.V0.adjoint();
    return (N + N.adjoint()) * 0.5;
}

inline double rel_residual(const cmat &num, double den)
{
    return den > 0.0 ? num.norm() / den : num.norm();
}

} // namespace hmimos
