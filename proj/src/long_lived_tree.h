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

#ifndef MZMQEC_LONG_LIVED_TREE_H
#define MZMQEC_LONG_LIVED_TREE_H

#include <cstdint>
#include <vector>

#include "mzmqec/noise.h"

namespace mzmqec {

/// Step 0 with hopping for one time step. `rnd` supplies uniform() and
/// below(n); `apply(island, mask)` must update whatever `is_odd` reads.
template <class Rand, class IsOdd, class Apply>
void long_lived_step0(
    const std::vector<MeasuredPair> &pairs, const std::vector<uint8_t> &in_pair, size_t n_islands,
    const EventProbs &probs, Rand &rnd, IsOdd is_odd, Apply apply) {
    uint32_t n_sites = uint32_t(2 * probs.m);
    for (const auto &p : pairs) {
        size_t members[2] = {p.island_a, p.island_b};
        const size_t k = 2;
        for (size_t it = 0; it < k * k; it++) {
            bool odd_a = is_odd(p.island_a);
            bool odd_b = is_odd(p.island_b);
            if (!odd_a && !odd_b) {
                break;
            }
            size_t pick = odd_a && odd_b ? rnd.below(2) : (odd_a ? 0 : 1);
            size_t src = members[pick];
            bool final_step = it + 1 == k * k;
            double u = rnd.uniform();
            if (!final_step && u < probs.p_hop) {
                const auto &c = p.connected[rnd.below(2)];
                apply(p.island_a, 1u << c.first);
                apply(p.island_b, 1u << c.second);
                continue;
            }
            double v = final_step ? u : u - probs.p_hop;
            double p_relax = final_step ? probs.p_relax_final : probs.p_relax_tree;
            if (v < p_relax) {
                apply(src, 1u << rnd.below(n_sites));
            }
            break;
        }
    }
    for (size_t j = 0; j < n_islands; j++) {
        if (in_pair[j] || !is_odd(j)) {
            continue;
        }
        // A lone island only gets the final tree step.
        if (rnd.uniform() < probs.p_relax_final) {
            apply(j, 1u << rnd.below(n_sites));
        }
    }
}

}  // namespace mzmqec

#endif
