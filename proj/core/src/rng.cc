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

#include "polsim/rng.h"

namespace polsim {

namespace {

constexpr uint32_t PHILOX_M0 = 0xD2511F53;
constexpr uint32_t PHILOX_M1 = 0xCD9E8D57;
constexpr uint32_t PHILOX_W0 = 0x9E3779B9;
constexpr uint32_t PHILOX_W1 = 0xBB67AE85;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t &hi, uint32_t &lo) {
    uint64_t product = uint64_t{a} * uint64_t{b};
    hi = static_cast<uint32_t>(product >> 32);
    lo = static_cast<uint32_t>(product);
}

}  // namespace

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; round++) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(PHILOX_M0, ctr[0], hi0, lo0);
        mulhilo(PHILOX_M1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += PHILOX_W0;
        key[1] += PHILOX_W1;
    }
    return ctr;
}

PhiloxStream::PhiloxStream(RngSpec spec)
    : key_{static_cast<uint32_t>(spec.seed), static_cast<uint32_t>(spec.seed >> 32)}, stream_(spec.stream) {
}

void PhiloxStream::refill() {
    buffer_ = philox4x32_10(
        {static_cast<uint32_t>(block_),
         static_cast<uint32_t>(block_ >> 32),
         static_cast<uint32_t>(stream_),
         static_cast<uint32_t>(stream_ >> 32)},
        key_);
    block_++;
    used_ = 0;
}

PhiloxStream::result_type PhiloxStream::operator()() {
    if (used_ == 2) {
        refill();
    }
    uint64_t lo = buffer_[2 * used_];
    uint64_t hi = buffer_[2 * used_ + 1];
    used_++;
    return (hi << 32) | lo;
}

double PhiloxStream::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

void PhiloxStream::seek(uint64_t position) {
    block_ = position / 2;
    used_ = 2;
    if (position % 2 == 1) {
        refill();
        used_ = 1;
    }
}

}  // namespace polsim
