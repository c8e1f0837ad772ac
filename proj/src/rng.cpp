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

#include "langevin/rng.hpp"

#include <limits>

#include "langevin/errors.hpp"

namespace langevin {

NormalStream derive_stream(std::uint64_t master_seed, std::uint64_t chain_index) {
    return derive_stream(master_seed, 0, chain_index);
}

NormalStream derive_stream(std::uint64_t master_seed, std::uint32_t level,
                           std::uint64_t chain_index) {
    if (chain_index > std::numeric_limits<std::uint32_t>::max())
        throw InvalidInput("chain index exceeds 2^32 - 1");
    return NormalStream(master_seed, static_cast<std::uint32_t>(chain_index), level);
}

}  // namespace langevin
