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

#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <span>

namespace langevin {

// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter encrypt(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

// Stream of standard normal draws. The key is the master seed; the counter
// carries (block index, chain index, substream), so streams with distinct
// (chain, substream) never share a counter value. Each cipher block gives
// two uniforms, turned into two normals by Box-Muller.
class NormalStream {
public:
    NormalStream(std::uint64_t master_seed, std::uint32_t chain, std::uint32_t substream = 0)
        : key_{static_cast<std::uint32_t>(master_seed),
               static_cast<std::uint32_t>(master_seed >> 32)},
          chain_(chain), substream_(substream) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto r = Philox4x32::encrypt({static_cast<std::uint32_t>(block_),
                                            static_cast<std::uint32_t>(block_ >> 32), chain_,
                                            substream_},
                                           key_);
        ++block_;
        const std::uint64_t a = (std::uint64_t{r[0]} << 32) | r[1];
        const std::uint64_t b = (std::uint64_t{r[2]} << 32) | r[3];
        constexpr double kScale = 0x1.0p-53;
        const double u1 = static_cast<double>((a >> 11) + 1) * kScale;  // (0, 1]
        const double u2 = static_cast<double>(b >> 11) * kScale;        // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    void fill(std::span<double> out) {
        for (double& v : out) v = normal();
    }

    std::uint64_t blocks_used() const { return block_; }

private:
    Philox4x32::Key key_;
    std::uint32_t chain_;
    std::uint32_t substream_;
    std::uint64_t block_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Degenerate stream: every draw is 0. Turns the scheme into its
// deterministic skeleton.
struct ZeroStream {
    std::uint64_t draws = 0;
    double normal() {
        ++draws;
        return 0.0;
    }
};

template <class S>
concept GaussianStream = requires(S& s) {
    { s.normal() } -> std::convertible_to<double>;
};

/// Independent stream for chain `chain_index` of the ensemble seeded by `master_seed`.
NormalStream derive_stream(std::uint64_t master_seed, std::uint64_t chain_index);

/// Stream for (grid level, chain): used when one seed drives several ensembles.
NormalStream derive_stream(std::uint64_t master_seed, std::uint32_t level,
                           std::uint64_t chain_index);

}  // namespace langevin
