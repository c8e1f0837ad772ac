/*
   Copyright 2026 The langevin-stopped authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "langevin/errors.hpp"
#include "langevin/rng.hpp"
#include "langevin/stats.hpp"

using namespace langevin;

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::encrypt(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::encrypt(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              K{0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::encrypt(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              K{0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
    static_assert(Philox4x32::encrypt(C{0, 0, 0, 0}, K{0, 0})[0] == 0x6627e8d5u);
}

TEST_CASE("same seed and index give the same draws") {
    auto a = derive_stream(99, 5);
    auto b = derive_stream(99, 5);
    for (int i = 0; i < 1000; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("distinct chains and levels give distinct draws") {
    auto first_draws = [](NormalStream s) {
        std::vector<double> v(1000);
        s.fill(v);
        return v;
    };
    const auto c0 = first_draws(derive_stream(1234, 0));
    const auto c1 = first_draws(derive_stream(1234, 1));
    const auto l1 = first_draws(derive_stream(1234, 1, 0));
    const auto s2 = first_draws(derive_stream(1235, 0));
    CHECK(c0 != c1);
    CHECK(c0 != l1);
    CHECK(c0 != s2);
    std::size_t equal = 0;
    for (std::size_t i = 0; i < c0.size(); ++i) equal += c0[i] == c1[i];
    CHECK(equal == 0);
}

TEST_CASE("level 0 is the two-argument stream") {
    auto a = derive_stream(77, 3);
    auto b = derive_stream(77, 0, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("normal draws have unit variance") {
    for (std::uint64_t chain : {0u, 1u, 1000u}) {
        auto s = derive_stream(20261018, chain);
        RunningStats st;
        for (int i = 0; i < 100000; ++i) st.push(s.normal());
        CHECK(std::abs(st.mean()) < 0.02);
        CHECK(std::abs(st.variance() - 1.0) < 0.05);
    }
}

TEST_CASE("draws are finite and two per block") {
    auto s = derive_stream(0, 0);
    for (int i = 0; i < 20000; ++i) CHECK(std::isfinite(s.normal()));
    CHECK(s.blocks_used() == 10000);
}

TEST_CASE("chain index must fit the counter") {
    const std::uint64_t too_big = std::uint64_t{std::numeric_limits<std::uint32_t>::max()} + 1;
    CHECK_THROWS_AS(derive_stream(1, too_big), InvalidInput);
}

TEST_CASE("zero stream counts draws") {
    ZeroStream z;
    CHECK(z.normal() == 0.0);
    CHECK(z.normal() == 0.0);
    CHECK(z.draws == 2);
}
