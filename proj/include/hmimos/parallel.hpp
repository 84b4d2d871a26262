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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace hmimos
{

namespace detail
{
inline std::atomic<int> &thread_override()
{
    static std::atomic<int> v{0};
    return v;
}
} // namespace detail

// Worker cap: set_thread_count() wins, then HMIMOS_THREADS, then 1.
inline void set_thread_count(int n) { detail::thread_override().store(n < 0 ? 0 : n); }

inline int thread_count()
{
    const int o = detail::thread_override().load();
    if (o > 0)
        return o;
    if (const char *env = std::getenv("HMIMOS_THREADS"))
    {
        try
        {
            const int n = std::stoi(env);
            if (n > 0)
                return n;
        }
        catch (const std::exception &)
        {
        }
    }
    return 1;
}

// Runs body(i) for i in [0, n). Work is split into contiguous static chunks;
// each index is handled exactly once, so results written to disjoint slots do
// not depend on the worker count. The first exception thrown is rethrown.
template <typename Body>
void parallel_for(long n, Body &&body)
{
    const long workers = std::min<long>(thread_count(), n);
    if (workers <= 1)
    {
        for (long i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<size_t>(workers));
    const long chunk = (n + workers - 1) / workers;
    for (long w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            const long lo = w * chunk, hi = std::min(n, lo + chunk);
            try
            {
                for (long i = lo; i < hi; ++i)
                    body(i);
            }
            catch (...)
            {
                errs[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto &t : pool)
        t.join();
    for (auto &e : errs)
        if (e)
            std::rethrow_exception(e);
}

} // namespace hmimos
