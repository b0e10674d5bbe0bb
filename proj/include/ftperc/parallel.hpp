// Copyright 2026 The ftperc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ftperc {

/// Splits [0, n) into at most `threads` contiguous chunks and runs
/// `body(begin, end, chunk_index)` on each, one std::thread per chunk.
/// Returns the number of chunks used. The first exception thrown by any
/// chunk is rethrown on the calling thread.
template <typename Body>
std::size_t parallel_chunks(std::size_t n, std::size_t threads, Body &&body) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        body(std::size_t{0}, n, std::size_t{0});
        return 1;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t c = 0; c < threads; ++c) {
        const std::size_t begin = n * c / threads;
        const std::size_t end = n * (c + 1) / threads;
        workers.emplace_back([&, begin, end, c] {
            try {
                body(begin, end, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto &w : workers) {
        w.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return threads;
}

}  // namespace ftperc
