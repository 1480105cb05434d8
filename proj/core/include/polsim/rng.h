// Copyright 2026 The polsim Authors
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

#ifndef POLSIM_RNG_H
#define POLSIM_RNG_H

#include <array>
#include <cstdint>
#include <limits>

namespace polsim {

/// Identifies one pseudorandom stream: the key (seed) and the stream number.
struct RngSpec {
    uint64_t seed = 0;
    uint64_t stream = 0;

    bool operator==(const RngSpec &other) const = default;
};

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Counter-based generator. The 128-bit counter is (block_lo, block_hi, stream_lo, stream_hi), so
/// distinct streams under one seed never share a block, and any position can be reached directly.
class PhiloxStream {
   public:
    using result_type = uint64_t;

    explicit PhiloxStream(RngSpec spec);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Moves to the given 64-bit output position within the stream.
    void seek(uint64_t position);

   private:
    void refill();

    std::array<uint32_t, 2> key_;
    uint64_t stream_;
    uint64_t block_ = 0;
    std::array<uint32_t, 4> buffer_{};
    int used_ = 2;
};

}  // namespace polsim

#endif
