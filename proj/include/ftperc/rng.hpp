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

#include <cstdint>

namespace ftperc {

// Counter-based random streams. Every random draw in the library is a pure
// function of (master seed, stream indices, counter), so results never depend
// on scheduling or on how many worker threads are used.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Key of substream `index` of the stream keyed by `seed`.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + (index + 1) * kGolden);
}

/// Draw number `counter` of the stream keyed by `key`.
constexpr std::uint64_t draw(std::uint64_t key, std::uint64_t counter) noexcept {
    return mix64(key + (counter + 1) * kGolden);
}

/// Maps a 64-bit word to [0, 1) using its top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// True with probability p (exactly never for p <= 0, always for p >= 1).
constexpr bool bernoulli(std::uint64_t bits, double p) noexcept {
    return to_unit(bits) < p;
}

/// Sequential generator over one counter-based stream.
class StreamRng {
   public:
    explicit constexpr StreamRng(std::uint64_t key) noexcept : key_(key) {
    }

    constexpr std::uint64_t next() noexcept {
        return draw(key_, counter_++);
    }

    constexpr double uniform() noexcept {
        return to_unit(next());
    }

    /// Uniform integer in [0, n). Requires n >= 1.
    std::uint64_t below(std::uint64_t n) noexcept {
        // Multiply-shift with rejection of the biased low region.
        const std::uint64_t threshold = (0 - n) % n;
        while (true) {
            const unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
            if (static_cast<std::uint64_t>(m) >= threshold) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ftperc
