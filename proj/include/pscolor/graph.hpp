#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <span>
#include <vector>

#include "pscolor/types.hpp"

namespace pscolor {

/// Immutable simple undirected graph in CSR form with sorted adjacency.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n);
    /// Throws InvalidArgument on self-loops, duplicate edges or out-of-range ids.
    Graph(std::size_t n, std::vector<Edge> edges);

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t max_degree() const { return max_degree_; }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const Vertex> neighbors(Vertex v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    bool has_edge(Vertex a, Vertex b) const;
    /// All edges, sorted lexicographically.
    std::span<const Edge> edges() const { return edges_; }

private:
    std::size_t n_ = 0;
    std::size_t max_degree_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> adjacency_;
    std::vector<Edge> edges_;
};

/// Edge-list text format: first line "n m", then one "u v" line per edge.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);
Graph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const Graph& g);

/// Subgraph induced by `vertices`, relabeled in the given order.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

}  // namespace pscolor
