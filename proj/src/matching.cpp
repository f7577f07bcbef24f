#include "pscolor/matching.hpp"

#include <limits>
#include <queue>
#include <stdexcept>

namespace pscolor {

namespace {

constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
public:
    explicit HopcroftKarp(const BipartiteGraph& g)
        : g_(g), match_left_(g.num_left, kUnmatched), match_right_(g.num_right, kUnmatched), dist_(g.num_left) {}

    BipartiteMatching run() {
        std::size_t size = 0;
        while (bfs()) {
            iter_.assign(g_.num_left, 0);
            for (std::size_t u = 0; u < g_.num_left; ++u) {
                if (match_left_[u] == kUnmatched && dfs(u)) ++size;
            }
        }
        return {std::move(match_left_), size};
    }

private:
    bool bfs() {
        std::queue<std::size_t> queue;
        for (std::size_t u = 0; u < g_.num_left; ++u) {
            if (match_left_[u] == kUnmatched) {
                dist_[u] = 0;
                queue.push(u);
            } else {
                dist_[u] = kInfinity;
            }
        }
        bool reachable_free = false;
        while (!queue.empty()) {
            std::size_t u = queue.front();
            queue.pop();
            for (std::size_t r : g_.adjacency[u]) {
                std::size_t next = match_right_[r];
                if (next == kUnmatched) {
                    reachable_free = true;
                } else if (dist_[next] == kInfinity) {
                    dist_[next] = dist_[u] + 1;
                    queue.push(next);
                }
            }
        }
        return reachable_free;
    }

    // Iterative layered DFS with per-vertex edge cursors.
    bool dfs(std::size_t root) {
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            std::size_t u = stack.back();
            const auto& adj = g_.adjacency[u];
            bool advanced = false;
            while (iter_[u] < adj.size()) {
                std::size_t r = adj[iter_[u]];
                std::size_t next = match_right_[r];
                if (next == kUnmatched) {
                    for (std::size_t i = stack.size(); i-- > 0;) {
                        std::size_t left = stack[i];
                        std::size_t right = g_.adjacency[left][iter_[left]];
                        match_left_[left] = right;
                        match_right_[right] = left;
                    }
                    return true;
                }
                if (dist_[next] == dist_[u] + 1) {
                    stack.push_back(next);
                    advanced = true;
                    break;
                }
                ++iter_[u];
            }
            if (!advanced) {
                dist_[u] = kInfinity;
                stack.pop_back();
                if (!stack.empty()) ++iter_[stack.back()];
            }
        }
        return false;
    }

    const BipartiteGraph& g_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
    std::vector<std::size_t> iter_;
};

}  // namespace

BipartiteMatching max_bipartite_matching(const BipartiteGraph& g) {
    if (g.adjacency.size() != g.num_left) throw std::invalid_argument("bipartite adjacency size mismatch");
    for (const auto& adj : g.adjacency) {
        for (std::size_t r : adj) {
            if (r >= g.num_right) throw std::invalid_argument("bipartite edge to missing right vertex");
        }
    }
    return HopcroftKarp(g).run();
}

}  // namespace pscolor
