// Copyright 2026 The mzmqec Authors
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

#ifndef MZMQEC_RNG_H
#define MZMQEC_RNG_H

#include <cstdint>

namespace mzmqec {

inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** with one independent stream per (seed, stream index).
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed, uint64_t stream = 0) {
        uint64_t sm = seed;
        uint64_t mixed = splitmix64(sm) ^ (stream * 0xD1B54A32D192ED03ULL);
        sm = mixed;
        for (auto &w : s_) {
            w = splitmix64(sm);
        }
    }

    static constexpr uint64_t min() {
        return 0;
    }
    static constexpr uint64_t max() {
        return ~uint64_t{0};
    }

    uint64_t operator()() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return double((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n > 0.
    uint64_t below(uint64_t n) {
        return uint64_t((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

   private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    uint64_t s_[4];
};

}  // namespace mzmqec

#endif
