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

// Three users in front of a 15x15 surface: build both precoders and print
// the sum spectral efficiency for each power allocation.

#include <hmimos/hmimos.hpp>

#include <cstdio>

int main()
{
    using namespace hmimos;
    const std::vector<double> z = {1.0, 3.0, 5.0};
    polarized_channel H = assemble_channel(precoding_scenario(z, 4, 3));
    normalize_for_se(H);

    const precoder_set tl = two_layer_precoder(H);
    const precoder_set uc = user_cluster_precoder(H, cluster_users(z));
    std::printf("cancellation residual %.3g\n", cancellation_residual(H, tl.layer1));
    for (int q = 0; q < 3; ++q)
        std::printf("two-layer %s: %ld streams, BD leakage %.3g\n", pol_name(q), long(tl.layer2[q].streams()),
                    bd_leakage(tl.layer2[q]));

    std::printf("%8s %10s %10s %10s %10s %10s %10s\n", "snr_db", "tl-pa1", "tl-pa2", "tl-pa3", "uc-pa1", "uc-pa2",
                "uc-pa3");
    for (double snr : {-10.0, 0.0, 10.0, 20.0})
    {
        const double noise = noise_for_snr(snr);
        std::printf("%8.1f", snr);
        for (const precoder_set *s : {&tl, &uc})
            for (auto pa : {pa_scheme::pa1, pa_scheme::pa2, pa_scheme::pa3})
            {
                const auto g = s->gains();
                std::printf(" %10.4f", total_se(g, allocate(pa, g, 1.0, noise), noise));
            }
        std::printf("\n");
    }
    return 0;
}
