// SPDX-License-Identifier: Apache-2.0
//
// vlink - condensed-parameter system-level simulation for vehicular links
// Copyright (C) 2026 The vlink Authors
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

#include <cstdint>
#include <initializer_list>

namespace vlink
{
    // Counter-based randomness: every draw is a pure function of a key tuple and a
    // counter, so results never depend on evaluation order or thread schedule.

    constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    constexpr std::uint64_t mix_key(std::initializer_list<std::uint64_t> parts) noexcept
    {
        std::uint64_t h = 0x243F6A8885A308D3ULL;
        for (auto p : parts)
            h = splitmix64(h ^ splitmix64(p));
        return h;
    }

    class KeyedStream
    {
    public:
        explicit constexpr KeyedStream(std::uint64_t key) noexcept : key_(key) {}

        constexpr std::uint64_t next_u64() noexcept { return splitmix64(key_ ^ splitmix64(counter_++)); }

        // Uniform in [0, 1) with 53 random bits.
        constexpr double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

        constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

        // Standard normal via Box-Muller; consumes two draws.
        double normal() noexcept;

    private:
        std::uint64_t key_;
        std::uint64_t counter_ = 0;
    };
}
