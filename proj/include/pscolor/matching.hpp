#pragma once

#include <cstddef>
#include <vector>

namespace pscolor {

struct BipartiteGraph {
    std::size_t num_left = 0;
    std::size_t num_right = 0;
    std::vector<std::vector<std::size_t>> adjacency;  // left -> right ids
};

inline constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

struct BipartiteMatching {
    std::vector<std::size_t> left_to_right;  // kUnmatched when free
    std::size_t size = 0;
};

/// Hopcroft-Karp maximum-cardinality matching.
BipartiteMatching max_bipartite_matching(const BipartiteGraph& g);

}  // namespace pscolor
