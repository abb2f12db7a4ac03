// SPDX-License-Identifier: Apache-2.0
//
// riskg - simulation library for RIS-assisted physical-layer key generation
// over spatially correlated multi-antenna channels
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

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace riskg {

/// Run fn(i) for i in [0, count) on up to `threads` workers.
///
/// Work is claimed in fixed-size chunks from an atomic cursor, so the set of
/// indices each callback sees does not depend on scheduling. Callers that need
/// reproducible results must write into per-index slots and reduce afterwards
/// in index order; nothing here depends on the thread count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (count == 0)
        return;
    if (threads <= 1 || count == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    const std::size_t chunk = std::max<std::size_t>(1, count / (threads * 8));
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        for (;;)
        {
            const std::size_t begin = cursor.fetch_add(chunk);
            if (begin >= count || failed.load(std::memory_order_relaxed))
                return;
            const std::size_t end = std::min(begin + chunk, count);
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            }
            catch (...)
            {
                if (!failed.exchange(true))
                    error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

inline unsigned default_thread_count()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

} // namespace riskg
