#include "pscolor/coloring.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <unordered_set>

namespace pscolor {

PartialColoring::PartialColoring(const Graph& g, std::size_t num_colors)
    : graph_(&g), num_colors_(num_colors), colors_(g.num_vertices(), kNoColor), blocked_(g.num_vertices() * num_colors, 0) {
    if (num_colors == 0) throw InvalidArgument("coloring needs at least one color");
}

void PartialColoring::assign(Vertex v, Color c) {
    if (c < 1 || c > num_colors_) throw InvalidArgument("color " + std::to_string(c) + " out of range");
    if (is_colored(v)) throw ProperViolation("vertex " + std::to_string(v) + " is already colored");
    if (!available(v, c)) {
        throw ProperViolation("color " + std::to_string(c) + " is held by a neighbor of vertex " + std::to_string(v));
    }
    colors_[v] = c;
    ++colored_;
    for (Vertex w : graph_->neighbors(v)) ++blocked_[index(w, c)];
}

void PartialColoring::unassign(Vertex v) {
    const Color c = colors_[v];
    if (c == kNoColor) return;
    colors_[v] = kNoColor;
    --colored_;
    for (Vertex w : graph_->neighbors(v)) --blocked_[index(w, c)];
}

std::vector<Edge> improper_edges(const PartialColoring& coloring) {
    std::vector<Edge> bad;
    for (const auto& e : coloring.graph().edges()) {
        if (coloring.is_colored(e.u) && coloring.color(e.u) == coloring.color(e.v)) bad.push_back(e);
    }
    return bad;
}

OneShotResult one_shot_color(PartialColoring& coloring, std::span<const Vertex> sparse, std::span<const Color> proposals) {
    const Graph& g = coloring.graph();
    if (proposals.size() != g.num_vertices()) throw InvalidArgument("one-shot proposals must cover every vertex");
    OneShotResult result;
    std::vector<Vertex> winners;
    for (Vertex v : sparse) {
        const Color x = proposals[v];
        if (x == kNoColor || coloring.is_colored(v)) continue;
        ++result.proposed;
        bool clash = false;
        for (Vertex u : g.neighbors(v)) {
            if (proposals[u] == x) {
                clash = true;
                break;
            }
        }
        if (!clash && coloring.available(v, x)) winners.push_back(v);
    }
    for (Vertex v : winners) coloring.assign(v, proposals[v]);
    result.colored = winners.size();
    return result;
}

std::vector<Color> first_colors(const Palette& palette, std::span<const Vertex> sparse) {
    std::vector<Color> out(palette.num_vertices(), kNoColor);
    for (Vertex v : sparse) {
        auto l1 = palette.batch(0, v);
        if (!l1.empty()) out[v] = l1[0];
    }
    return out;
}

GreedyRoundsResult greedy_color_rounds(PartialColoring& coloring, const Palette& palette, std::span<const Vertex> sparse,
                                       std::size_t rounds) {
    const Graph& g = coloring.graph();
    GreedyRoundsResult result;
    std::vector<Vertex> pending;
    for (Vertex v : sparse) {
        if (!coloring.is_colored(v)) pending.push_back(v);
    }
    std::vector<Color> proposal(g.num_vertices(), kNoColor);
    std::vector<Vertex> winners;
    for (std::size_t round = 1; round <= rounds && !pending.empty(); ++round) {
        ++result.rounds;
        for (Vertex v : pending) {
            auto l1 = palette.batch(0, v);
            proposal[v] = l1.empty() ? kNoColor : l1[round % l1.size()];
        }
        winners.clear();
        for (Vertex v : pending) {
            const Color x = proposal[v];
            if (x == kNoColor || !coloring.available(v, x)) continue;
            bool clash = false;
            for (Vertex u : g.neighbors(v)) {
                if (proposal[u] == x) {
                    clash = true;
                    break;
                }
            }
            if (!clash) winners.push_back(v);
        }
        for (Vertex v : winners) coloring.assign(v, proposal[v]);
        for (Vertex v : pending) proposal[v] = kNoColor;
        result.colored += winners.size();
        std::erase_if(pending, [&](Vertex v) { return coloring.is_colored(v); });
    }
    result.residual = std::move(pending);
    return result;
}

std::size_t colorful_target(double avg_complement_degree) {
    return static_cast<std::size_t>(std::ceil(4.0 * avg_complement_degree - 1e-9));
}

namespace {

struct ColorfulSearch {
    const Graph* g = nullptr;
    std::vector<Vertex> vertices;                 // compact index -> vertex
    std::vector<std::vector<std::size_t>> cands;  // per color, compact indices ascending
    std::vector<Color> colors;
    std::size_t target = 0;
    std::size_t budget = 0;
    bool exhausted_budget = false;
    std::vector<char> used;
    std::vector<ColorfulTriple> current;
    std::vector<ColorfulTriple> best;
    std::unordered_set<std::string> failed;  // (color index, used set) known not to improve best

    std::string state_key(std::size_t i) const {
        std::string key(used.begin(), used.end());
        key += std::to_string(i);
        return key;
    }

    std::size_t free_count() const { return static_cast<std::size_t>(std::count(used.begin(), used.end(), 0)); }

    void run(std::size_t i) {
        if (best.size() >= target) return;
        if (current.size() > best.size()) best = current;
        if (best.size() >= target || i == colors.size()) return;
        if (budget == 0) {
            exhausted_budget = true;
            return;
        }
        --budget;
        const std::size_t bound = current.size() + std::min(colors.size() - i, free_count() / 2);
        if (bound <= best.size()) return;
        const std::string key = state_key(i);
        if (failed.count(key)) return;
        const std::size_t before = best.size();
        const auto& cs = cands[i];
        for (std::size_t a = 0; a < cs.size() && best.size() < target; ++a) {
            if (used[cs[a]]) continue;
            for (std::size_t b = a + 1; b < cs.size() && best.size() < target; ++b) {
                if (used[cs[b]] || g->has_edge(vertices[cs[a]], vertices[cs[b]])) continue;
                used[cs[a]] = used[cs[b]] = 1;
                current.push_back({vertices[cs[a]], vertices[cs[b]], colors[i]});
                run(i + 1);
                current.pop_back();
                used[cs[a]] = used[cs[b]] = 0;
            }
        }
        if (best.size() < target) run(i + 1);
        if (best.size() == before && !exhausted_budget) failed.insert(key);
    }
};

}  // namespace

ColorfulMatching find_colorful_matching(const PartialColoring& coloring, const Palette& palette,
                                        std::span<const Vertex> clique, std::size_t target, std::size_t search_budget) {
    ColorfulMatching matching;
    matching.target = target;
    if (target == 0) return matching;
    std::vector<Vertex> members(clique.begin(), clique.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    std::map<Color, std::vector<std::size_t>> holders;
    ColorfulSearch search;
    search.g = &coloring.graph();
    for (Vertex v : members) {
        if (coloring.is_colored(v)) continue;
        const std::size_t idx = search.vertices.size();
        bool any = false;
        for (Color c : palette.batch(1, v)) {
            if (!coloring.available(v, c)) continue;
            auto& list = holders[c];
            if (list.empty() || list.back() != idx) list.push_back(idx);
            any = true;
        }
        if (any) search.vertices.push_back(v);
    }
    for (auto& [c, idxs] : holders) {
        if (idxs.size() < 2) continue;
        search.colors.push_back(c);
        search.cands.push_back(std::move(idxs));
    }
    search.target = target;
    search.budget = search_budget;
    search.used.assign(search.vertices.size(), 0);
    search.run(0);
    matching.triples = std::move(search.best);
    matching.short_of_target = matching.triples.size() < target;
    matching.search_exhaustive = !search.exhausted_budget;
    return matching;
}

void apply_colorful_matching(PartialColoring& coloring, const ColorfulMatching& matching) {
    const Graph& g = coloring.graph();
    for (const auto& t : matching.triples) {
        if (t.u == t.v || g.has_edge(t.u, t.v)) {
            throw ProperViolation("colorful triple (" + std::to_string(t.u) + "," + std::to_string(t.v) + ") is not a non-edge");
        }
        if (coloring.is_colored(t.u) || coloring.is_colored(t.v)) throw ProperViolation("colorful triple endpoint already colored");
        if (!coloring.available(t.u, t.color) || !coloring.available(t.v, t.color)) {
            throw ProperViolation("colorful triple color " + std::to_string(t.color) + " is no longer available");
        }
        coloring.assign(t.u, t.color);
        coloring.assign(t.v, t.color);
    }
}

PaletteGraph build_palette_graph(const PartialColoring& coloring, const Palette& palette, std::span<const Vertex> clique) {
    PaletteGraph pg;
    for (Vertex v : clique) {
        if (!coloring.is_colored(v)) pg.left.push_back(v);
    }
    std::sort(pg.left.begin(), pg.left.end());
    pg.bipartite.num_left = pg.left.size();
    pg.bipartite.num_right = coloring.num_colors();
    pg.bipartite.adjacency.resize(pg.left.size());
    for (std::size_t i = 0; i < pg.left.size(); ++i) {
        const Vertex v = pg.left[i];
        auto& adj = pg.bipartite.adjacency[i];
        for (Color c : palette.batch(2, v)) {
            if (coloring.available(v, c)) adj.push_back(c - 1);
        }
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return pg;
}

CompletionResult complete_clique_coloring(PartialColoring& coloring, const Palette& palette, std::span<const Vertex> clique) {
    CompletionResult result;
    auto pg = build_palette_graph(coloring, palette, clique);
    result.uncolored = pg.left.size();
    if (pg.left.empty()) return result;
    auto m = max_bipartite_matching(pg.bipartite);
    for (std::size_t i = 0; i < pg.left.size(); ++i) {
        if (m.left_to_right[i] == kUnmatched) {
            result.residual.push_back(pg.left[i]);
        } else {
            coloring.assign(pg.left[i], static_cast<Color>(m.left_to_right[i] + 1));
            ++result.matched;
        }
    }
    return result;
}

namespace {

bool try_local_search(PartialColoring& coloring, const Palette& palette, Vertex v, Vertex& moved) {
    const Graph& g = coloring.graph();
    for (Color c : palette.list(v)) {
        if (coloring.blocking_count(v, c) != 1) continue;
        Vertex blocker = 0;
        for (Vertex w : g.neighbors(v)) {
            if (coloring.color(w) == c) {
                blocker = w;
                break;
            }
        }
        for (Color alt : palette.list(blocker)) {
            if (alt == c || !coloring.available(blocker, alt)) continue;
            coloring.unassign(blocker);
            coloring.assign(blocker, alt);
            coloring.assign(v, c);
            moved = blocker;
            return true;
        }
    }
    return false;
}

}  // namespace

FallbackResult fallback_color(PartialColoring& coloring, const Palette& palette, std::span<const Vertex> residuals,
                              const FallbackOptions& options) {
    const Graph& g = coloring.graph();
    FallbackResult result;
    std::vector<Vertex> order;
    for (Vertex v : residuals) {
        if (!coloring.is_colored(v)) order.push_back(v);
    }
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
        return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
    });
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<Vertex> left;
    for (Vertex v : order) {
        bool done = false;
        for (Color c : palette.list(v)) {
            if (coloring.available(v, c)) {
                coloring.assign(v, c);
                ++result.list_greedy;
                done = true;
                break;
            }
        }
        if (!done) left.push_back(v);
    }

    std::vector<Vertex> still;
    for (Vertex v : left) {
        Vertex moved = 0;
        if (try_local_search(coloring, palette, v, moved)) {
            ++result.local_search;
            result.recolored.push_back(moved);
        } else {
            still.push_back(v);
        }
    }

    if (options.strict_list || !options.full_neighbors) {
        result.failed = std::move(still);
        return result;
    }
    std::vector<char> used(coloring.num_colors() + 1, 0);
    for (Vertex v : still) {
        std::fill(used.begin(), used.end(), 0);
        for (Vertex w : options.full_neighbors(v)) used[coloring.color(w)] = 1;
        for (Vertex w : g.neighbors(v)) used[coloring.color(w)] = 1;
        Color pick = kNoColor;
        for (Color c = 1; c <= coloring.num_colors(); ++c) {
            if (!used[c]) {
                pick = c;
                break;
            }
        }
        if (pick == kNoColor) {
            result.failed.push_back(v);
            continue;
        }
        coloring.assign(v, pick);
        ++result.any_color;
    }
    return result;
}

std::size_t greedy_round_count(const Palette& palette, double round_constant) {
    std::size_t longest = 0;
    for (Vertex v = 0; v < palette.num_vertices(); ++v) longest = std::max(longest, palette.batch(0, v).size());
    const std::size_t n = palette.num_vertices();
    const double log_n = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
    const auto cap = static_cast<std::size_t>(std::ceil(round_constant * log_n));
    return longest == 0 ? 0 : std::min(longest - 1, cap);
}

namespace {

void check_proper(const PartialColoring& coloring, const char* phase) {
    auto bad = improper_edges(coloring);
    if (!bad.empty()) {
        throw ProperViolation(std::string("improper edge after ") + phase + ": (" + std::to_string(bad.front().u) + "," +
                              std::to_string(bad.front().v) + ")");
    }
}

}  // namespace

PipelineResult list_color_pipeline(const Graph& g, const HssDecomposition& decomposition, const Palette& palette,
                                   const PipelineConfig& config, const NeighborhoodFn& full_neighbors) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = g.num_vertices();
    if (palette.num_vertices() != n) throw InvalidArgument("palette and graph sizes differ");
    if (g.max_degree() > palette.max_degree()) {
        throw DegreeBoundExceeded("graph degree " + std::to_string(g.max_degree()) + " exceeds declared " +
                                  std::to_string(palette.max_degree()));
    }
    PartialColoring coloring(g, palette.num_colors());
    PipelineResult out;
    out.colored_by.assign(n, ColoredBy::none);
    RunReport& r = out.report;
    r.n = n;
    r.max_degree = palette.max_degree();
    r.degenerate = palette.max_degree() <= 1;

    auto mark_new = [&](ColoredBy how) {
        for (Vertex v = 0; v < n; ++v) {
            if (coloring.is_colored(v) && out.colored_by[v] == ColoredBy::none) out.colored_by[v] = how;
        }
    };
    auto checkpoint = [&](const char* phase) {
        if (config.check_each_phase) check_proper(coloring, phase);
    };

    std::vector<Vertex> residual;
    if (r.degenerate) {
        residual.resize(n);
        for (Vertex v = 0; v < n; ++v) residual[v] = v;
    } else {
        const auto& sparse = decomposition.sparse;
        r.sparse_vertices = sparse.size();
        r.one_shot_colored = one_shot_color(coloring, sparse, first_colors(palette, sparse)).colored;
        mark_new(ColoredBy::one_shot);
        auto greedy = greedy_color_rounds(coloring, palette, sparse, greedy_round_count(palette, config.round_constant));
        mark_new(ColoredBy::greedy_rounds);
        r.greedy_rounds = greedy.rounds;
        r.greedy_colored = greedy.colored;
        r.phase1_residual = greedy.residual.size();
        residual = std::move(greedy.residual);
        checkpoint("phase one");

        r.cliques = decomposition.cliques.size();
        for (std::size_t i = 0; i < decomposition.cliques.size(); ++i) {
            const double dbar = i < decomposition.stats.size() ? decomposition.stats[i].avg_complement_degree : 0.0;
            auto matching = find_colorful_matching(coloring, palette, decomposition.cliques[i], colorful_target(dbar));
            apply_colorful_matching(coloring, matching);
            r.colorful_pairs += matching.triples.size();
            r.colorful_target_total += matching.target;
            r.short_cliques += matching.short_of_target ? 1 : 0;
        }
        mark_new(ColoredBy::colorful_matching);
        checkpoint("phase two");

        for (const auto& clique : decomposition.cliques) {
            auto done = complete_clique_coloring(coloring, palette, clique);
            r.phase3_uncolored += done.uncolored;
            r.phase3_matched += done.matched;
            r.phase3_residual += done.residual.size();
            r.cliques_saturated += done.residual.empty() ? 1 : 0;
            residual.insert(residual.end(), done.residual.begin(), done.residual.end());
        }
        mark_new(ColoredBy::palette_matching);
        checkpoint("phase three");
    }

    if (config.enable_fallback || r.degenerate) {
        FallbackOptions options{config.strict_list, full_neighbors};
        auto fb = fallback_color(coloring, palette, residual, options);
        r.fallback_list_greedy = fb.list_greedy;
        r.fallback_local_search = fb.local_search;
        r.fallback_any_color = fb.any_color;
        r.fallback_failed = fb.failed.size();
        for (Vertex w : fb.recolored) out.colored_by[w] = ColoredBy::fallback_local;
        for (Vertex v = 0; v < n; ++v) {
            if (!coloring.is_colored(v) || out.colored_by[v] != ColoredBy::none) continue;
            out.colored_by[v] = palette.contains(v, coloring.color(v)) ? ColoredBy::fallback_list : ColoredBy::fallback_any;
        }
        checkpoint("fallback");
    } else {
        r.fallback_failed = residual.size();
    }

    r.list_compliant = true;
    for (Vertex v = 0; v < n; ++v) {
        if (coloring.is_colored(v) && !palette.contains(v, coloring.color(v))) r.list_compliant = false;
    }
    r.success = coloring.colored_count() == n;
    out.colors.assign(coloring.colors().begin(), coloring.colors().end());
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace pscolor
