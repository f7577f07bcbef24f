#include "pscolor/query_oracle.hpp"

#include <string>

namespace pscolor {

namespace {
constexpr std::size_t kMatrixLimit = 16384;
}

QueryOracle::QueryOracle(const Graph& g) : graph_(&g) {
    std::size_t n = g.num_vertices();
    if (n <= kMatrixLimit) {
        row_words_ = (n + 63) / 64;
        matrix_.assign(row_words_ * n, 0);
        for (const auto& e : g.edges()) {
            matrix_[e.u * row_words_ + e.v / 64] |= 1ULL << (e.v % 64);
            matrix_[e.v * row_words_ + e.u / 64] |= 1ULL << (e.u % 64);
        }
    }
}

void QueryOracle::check_vertex(Vertex v) const {
    if (v >= graph_->num_vertices()) {
        throw InvalidArgument("query vertex " + std::to_string(v) + " out of range");
    }
}

std::size_t QueryOracle::degree(Vertex v) {
    check_vertex(v);
    ++counts_.degree;
    return graph_->degree(v);
}

std::optional<Vertex> QueryOracle::neighbor(Vertex v, std::size_t i) {
    check_vertex(v);
    ++counts_.neighbor;
    auto nb = graph_->neighbors(v);
    if (i == 0 || i > nb.size()) return std::nullopt;
    return nb[i - 1];
}

bool QueryOracle::pair(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    ++counts_.pair;
    if (!matrix_.empty()) return (matrix_[u * row_words_ + v / 64] >> (v % 64)) & 1ULL;
    return graph_->has_edge(u, v);
}

}  // namespace pscolor
