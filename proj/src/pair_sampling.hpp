#pragma once

#include <cstdint>

#include "pscolor/random.hpp"
#include "pscolor/types.hpp"

namespace pscolor::detail {

/// Visits each pair u < v of an n-vertex set independently with probability p,
/// in lexicographic order, using geometric skips.
template <typename Visit>
void for_each_bernoulli_pair(std::size_t n, double p, Rng& rng, Visit&& visit) {
    if (n < 2 || p <= 0.0) return;
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::uint64_t idx = p >= 1.0 ? 0 : rng.geometric_skip(p);
    std::uint64_t u = 0, row_start = 0, row_len = n - 1;
    while (idx < total) {
        while (idx >= row_start + row_len) {
            row_start += row_len;
            ++u;
            --row_len;
        }
        visit(static_cast<Vertex>(u), static_cast<Vertex>(u + 1 + (idx - row_start)));
        if (p >= 1.0) {
            ++idx;
            continue;
        }
        std::uint64_t skip = rng.geometric_skip(p);
        if (skip >= total) break;
        idx += skip + 1;
    }
}

}  // namespace pscolor::detail
