// Copyright 2026-present the tessindex project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

namespace tessindex {

// Splittable counter-based random stream. A stream is addressed by
// (seed, stream_hi, stream_lo); the sequence is the splitmix64 output
// function applied to an incrementing counter keyed by that address.
// Output is identical on every platform and independent of call order
// across streams, so rows/tables can be generated in parallel.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_hi, std::uint64_t stream_lo) {
        std::uint64_t key = mix(seed + 0x9E3779B97F4A7C15ULL);
        key = mix(key ^ stream_hi);
        key = mix(key ^ stream_lo);
        state_ = key;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; values are produced in pairs.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // 1 - u in (0, 1] keeps the log argument away from zero
        double u1 = 1.0 - next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream address registry. Keeps independent consumers off each other's
// sequences when they share one user-facing seed.
namespace streams {
inline constexpr std::uint64_t kFactorUsers = 0;     // lo = row
inline constexpr std::uint64_t kFactorItems = 1;     // lo = row
inline constexpr std::uint64_t kSrp = 0x100;         // lo = table
inline constexpr std::uint64_t kSuperBit = 0x101;    // lo = table
inline constexpr std::uint64_t kConcomitant = 0x102; // lo = table
inline constexpr std::uint64_t kPcaTree = 0x103;     // lo = table
}  // namespace streams

}  // namespace tessindex
