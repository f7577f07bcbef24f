#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pscolor/graph.hpp"

namespace pscolor {

struct QueryCounts {
    std::uint64_t degree = 0;
    std::uint64_t neighbor = 0;
    std::uint64_t pair = 0;
    std::uint64_t total() const { return degree + neighbor + pair; }
};

/// Degree, neighbor and pair access to a hidden graph, with per-kind counters.
class QueryOracle {
public:
    explicit QueryOracle(const Graph& g);
    QueryOracle(Graph&&) = delete;

    std::size_t num_vertices() const { return graph_->num_vertices(); }
    std::size_t degree(Vertex v);
    /// i-th neighbor in sorted order, 1-based; nullopt when i > deg(v).
    std::optional<Vertex> neighbor(Vertex v, std::size_t i);
    bool pair(Vertex u, Vertex v);

    const QueryCounts& counts() const { return counts_; }
    void reset_counts() { counts_ = {}; }

private:
    void check_vertex(Vertex v) const;

    const Graph* graph_;
    QueryCounts counts_;
    std::size_t row_words_ = 0;
    std::vector<std::uint64_t> matrix_;
};

}  // namespace pscolor
