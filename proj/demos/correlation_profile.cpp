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

// Normalized transmit correlation of patch 1 against its neighbours for a
// 50-patch row, at a few image distances, plus the DoF of each matrix.

#include <hmimos/hmimos.hpp>

#include <cstdio>

int main()
{
    using namespace hmimos;
    const double k0 = 2.0 * pi;
    const auto row = patch_centers(grid_surface(50, 1, 0.1, 0.1));
    for (double z : {0.2, 0.4, 0.8})
    {
        std::printf("z = %.1f:", z);
        for (int p = 0; p < 3; ++p)
        {
            const correlation_matrix R = transmit_correlation(row, z, k0, p);
            const rmat N = R.normalized();
            std::printf("  %s: r12 %.3f r13 %.3f dof %.2f", pol_name(p), N(0, 1), N(0, 2), dof(R));
        }
        std::printf("\n");
    }
    return 0;
}
