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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

using namespace polsim;

TEST(philox4x32_10, known_answers) {
    using Block = std::array<uint32_t, 4>;
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(
        philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
        (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(
        philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
        (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(philox_stream, deterministic) {
    PhiloxStream a({7, 3});
    PhiloxStream b({7, 3});
    for (int k = 0; k < 100; k++) {
        EXPECT_EQ(a(), b());
    }
}

TEST(philox_stream, streams_and_seeds_differ) {
    PhiloxStream base({7, 3});
    PhiloxStream other_stream({7, 4});
    PhiloxStream other_seed({8, 3});
    int same_stream = 0;
    int same_seed = 0;
    for (int k = 0; k < 64; k++) {
        uint64_t v = base();
        same_stream += v == other_stream();
        same_seed += v == other_seed();
    }
    EXPECT_EQ(same_stream, 0);
    EXPECT_EQ(same_seed, 0);
}

TEST(philox_stream, seek) {
    PhiloxStream a({99, 1});
    std::vector<uint64_t> values;
    for (int k = 0; k < 20; k++) {
        values.push_back(a());
    }
    for (uint64_t pos : {0, 1, 2, 7, 19}) {
        PhiloxStream b({99, 1});
        b.seek(pos);
        EXPECT_EQ(b(), values[pos]) << pos;
    }
}

TEST(philox_stream, uniform_moments) {
    PhiloxStream rng({2026, 0});
    const int n = 200000;
    double sum = 0;
    double sum_sq = 0;
    std::vector<int> bins(10, 0);
    for (int k = 0; k < n; k++) {
        double u = rng.uniform();
        ASSERT_GE(u, 0);
        ASSERT_LT(u, 1);
        sum += u;
        sum_sq += u * u;
        bins[static_cast<int>(u * 10)]++;
    }
    EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sum_sq / n, 1.0 / 3, 0.005);
    for (int count : bins) {
        EXPECT_NEAR(count, n / 10, 5 * std::sqrt(n * 0.09));
    }
}
