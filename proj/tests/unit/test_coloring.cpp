#include <gtest/gtest.h>

#include <random>
#include <set>

#include "../oracles.hpp"
#include "pscolor/coloring.hpp"
#include "pscolor/generators.hpp"
#include "pscolor/matching.hpp"

using namespace pscolor;

namespace {

// Same lists in all three batches unless given separately.
Palette explicit_palette(std::size_t max_degree, const std::vector<std::array<std::vector<Color>, 3>>& lists) {
    PaletteParams params;
    params.mode = PaletteMode::explicit_lists;
    params.max_degree = max_degree;
    Palette::Batches batches;
    for (auto& b : batches) b.assign(lists.size(), {});
    for (std::size_t v = 0; v < lists.size(); ++v) {
        for (std::size_t b = 0; b < 3; ++b) batches[b][v] = lists[v][b];
    }
    return Palette(params, batches);
}

std::vector<Vertex> all_vertices(std::size_t n) {
    std::vector<Vertex> out(n);
    std::iota(out.begin(), out.end(), Vertex{0});
    return out;
}

}  // namespace

TEST(Matching, HopcroftKarpMatchesExhaustive) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        BipartiteGraph b;
        b.num_left = 1 + rng() % 10;
        b.num_right = 1 + rng() % 10;
        b.adjacency.resize(b.num_left);
        for (auto& adj : b.adjacency) {
            for (std::size_t r = 0; r < b.num_right; ++r) {
                if (rng() % 3 == 0) adj.push_back(r);
            }
        }
        const auto m = max_bipartite_matching(b);
        ASSERT_EQ(m.size, oracle::max_matching_exhaustive(b));
        std::set<std::size_t> used;
        std::size_t counted = 0;
        for (std::size_t l = 0; l < b.num_left; ++l) {
            const auto r = m.left_to_right[l];
            if (r == kUnmatched) continue;
            ++counted;
            EXPECT_TRUE(used.insert(r).second);
            EXPECT_NE(std::find(b.adjacency[l].begin(), b.adjacency[l].end(), r), b.adjacency[l].end());
        }
        EXPECT_EQ(counted, m.size);
    }
}

TEST(PartialColoring, TracksAvailability) {
    const Graph g(3, {{0, 1}, {1, 2}});
    PartialColoring c(g, 3);
    c.assign(0, 2);
    EXPECT_FALSE(c.available(1, 2));
    EXPECT_TRUE(c.available(2, 2));
    EXPECT_THROW(c.assign(1, 2), ProperViolation);
    EXPECT_THROW(c.assign(0, 1), ProperViolation);
    c.assign(2, 2);
    EXPECT_EQ(c.blocking_count(1, 2), 2u);
    c.unassign(0);
    EXPECT_EQ(c.blocking_count(1, 2), 1u);
    EXPECT_EQ(c.colored_count(), 1u);
    EXPECT_TRUE(improper_edges(c).empty());
}

TEST(OneShot, ConflictingProposalsBothDrop) {
    const Graph g(4, {{0, 1}, {1, 2}, {2, 3}});
    PartialColoring c(g, 3);
    const std::vector<Vertex> sparse = {0, 1, 2, 3};
    const std::vector<Color> proposals = {1, 1, 2, 3};
    const auto r = one_shot_color(c, sparse, proposals);
    EXPECT_EQ(r.proposed, 4u);
    EXPECT_EQ(r.colored, 2u);
    EXPECT_FALSE(c.is_colored(0));
    EXPECT_FALSE(c.is_colored(1));
    EXPECT_EQ(c.color(2), 2u);
    EXPECT_EQ(c.color(3), 3u);
}

TEST(OneShot, FirstColorsComeFromL1) {
    const Palette p = explicit_palette(2, {{{{3, 1}, {2}, {1}}}, {{{2}, {1}, {3}}}});
    const std::vector<Vertex> sparse = {1};
    EXPECT_EQ(first_colors(p, sparse), (std::vector<Color>{kNoColor, 2}));
}

TEST(GreedyRounds, ResolvesConflictsAcrossRounds) {
    const Graph g(2, {{0, 1}});
    const Palette p = explicit_palette(1, {{{{1, 2}, {}, {}}}, {{{1, 2}, {}, {}}}});
    PartialColoring c(g, 2);
    const std::vector<Vertex> sparse = {0, 1};
    const auto r = greedy_color_rounds(c, p, sparse, 3);
    // both propose 1 then both propose 2: no progress
    EXPECT_EQ(r.colored, 0u);
    EXPECT_EQ(r.residual.size(), 2u);

    const Palette q = explicit_palette(1, {{{{1, 2}, {}, {}}}, {{{1, 1}, {}, {}}}});
    PartialColoring d(g, 2);
    const auto s = greedy_color_rounds(d, q, sparse, 2);
    EXPECT_EQ(s.colored, 2u);
    EXPECT_EQ(d.color(0), 2u);
    EXPECT_EQ(d.color(1), 1u);
}

TEST(GreedyRounds, RoundCountFormula) {
    const Palette p = sample_palettes_uniform(1000, 200, 30, 1);
    EXPECT_EQ(greedy_round_count(p, 1.0), static_cast<std::size_t>(std::ceil(std::log(1000.0))));
    EXPECT_EQ(greedy_round_count(p, 100.0), 9u);
}

TEST(ColorfulMatching, TargetFormula) {
    EXPECT_EQ(colorful_target(0.0), 0u);
    EXPECT_EQ(colorful_target(0.25), 1u);
    EXPECT_EQ(colorful_target(0.3), 2u);
}

TEST(ColorfulMatching, MatchesExactOptimumUpToTarget) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = 4 + rng() % 10;
        std::vector<Edge> edges;
        for (Vertex u = 0; u < n; ++u) {
            for (Vertex v = u + 1; v < n; ++v) {
                if (rng() % 4 != 0) edges.push_back({u, v});
            }
        }
        const Graph g(n, edges);
        std::vector<std::array<std::vector<Color>, 3>> lists(n);
        for (auto& l : lists) {
            for (Color col = 1; col <= n; ++col) {
                if (rng() % 3 == 0) l[1].push_back(col);
            }
        }
        const Palette p = explicit_palette(n - 1, lists);
        PartialColoring c(g, n);
        const auto clique = all_vertices(n);
        const std::size_t optimum = oracle::colorful_optimum(c, p, clique);
        const auto m = find_colorful_matching(c, p, clique, n);
        EXPECT_TRUE(m.search_exhaustive);
        EXPECT_EQ(m.triples.size(), optimum);
        apply_colorful_matching(c, m);
        for (const auto& tr : m.triples) {
            EXPECT_EQ(c.color(tr.u), tr.color);
            EXPECT_EQ(c.color(tr.v), tr.color);
        }
        EXPECT_TRUE(improper_edges(c).empty());
    }
}

TEST(ColorfulMatching, RejectsStaleTriples) {
    const Graph g(3, {{0, 1}});
    PartialColoring c(g, 3);
    ColorfulMatching bad;
    bad.triples = {{0, 1, 1}};
    EXPECT_THROW(apply_colorful_matching(c, bad), ProperViolation);
}

TEST(PaletteCompletion, ColorsAPerfectMatchingClique) {
    const Graph g = generate_clique_collection(4, 1);
    const Palette p = explicit_palette(3, {{{{}, {}, {1, 2}}}, {{{}, {}, {1}}}, {{{}, {}, {3, 4}}}, {{{}, {}, {3}}}});
    PartialColoring c(g, 4);
    const auto clique = all_vertices(4);
    const auto graph = build_palette_graph(c, p, clique);
    EXPECT_EQ(graph.left.size(), 4u);
    EXPECT_EQ(graph.bipartite.num_right, 4u);
    const auto r = complete_clique_coloring(c, p, clique);
    EXPECT_EQ(r.matched, 4u);
    EXPECT_TRUE(r.residual.empty());
    EXPECT_EQ(c.color(0), 2u);
    EXPECT_EQ(c.color(3), 3u);
}

TEST(PaletteCompletion, LeavesResidualWhenListsCollide) {
    const Graph g = generate_clique_collection(3, 1);
    const Palette p = explicit_palette(2, {{{{}, {}, {1}}}, {{{}, {}, {1}}}, {{{}, {}, {2}}}});
    PartialColoring c(g, 3);
    const auto r = complete_clique_coloring(c, p, all_vertices(3));
    EXPECT_EQ(r.uncolored, 3u);
    EXPECT_EQ(r.matched, 2u);
    EXPECT_EQ(r.residual.size(), 1u);
}

TEST(Fallback, LocalSearchMovesASingleBlocker) {
    const Graph g(2, {{0, 1}});
    const Palette p = explicit_palette(1, {{{{1}, {}, {}}}, {{{1, 2}, {}, {}}}});
    PartialColoring c(g, 2);
    c.assign(1, 1);
    const std::vector<Vertex> residual = {0};
    const auto r = fallback_color(c, p, residual, {});
    EXPECT_EQ(r.local_search, 1u);
    EXPECT_EQ(r.recolored, (std::vector<Vertex>{1}));
    EXPECT_EQ(c.color(0), 1u);
    EXPECT_EQ(c.color(1), 2u);
    EXPECT_TRUE(r.list_compliant());
}

TEST(Fallback, StrictModeReportsFailureAndLenientUsesAnyColor) {
    const Graph g = generate_clique_collection(3, 1);
    const Palette p = explicit_palette(2, {{{{1}, {}, {}}}, {{{1}, {}, {}}}, {{{2}, {}, {}}}});
    const std::vector<Vertex> residual = {0, 1, 2};
    PartialColoring strict(g, 3);
    const auto r = fallback_color(strict, p, residual, {.strict_list = true, .full_neighbors = {}});
    EXPECT_EQ(r.failed.size(), 1u);
    EXPECT_FALSE(r.success());

    PartialColoring lenient(g, 3);
    FallbackOptions opts;
    opts.full_neighbors = [&g](Vertex v) { return std::vector<Vertex>(g.neighbors(v).begin(), g.neighbors(v).end()); };
    const auto s = fallback_color(lenient, p, residual, opts);
    EXPECT_TRUE(s.success());
    EXPECT_EQ(s.any_color, 1u);
    EXPECT_FALSE(s.list_compliant());
    EXPECT_TRUE(improper_edges(lenient).empty());
}

TEST(Pipeline, DegenerateGraphsColorGreedily) {
    const Graph g(5, {{0, 1}, {2, 3}});
    const Palette p = sample_palettes_uniform(5, 1, 2, 1);
    HssDecomposition d;
    d.sparse = all_vertices(5);
    const auto r = list_color_pipeline(g, d, p, {});
    EXPECT_TRUE(r.report.degenerate);
    EXPECT_TRUE(r.report.success);
    EXPECT_TRUE(oracle::is_proper(g, r.colors));
    for (Color c : r.colors) EXPECT_LE(c, 2u);
}

TEST(Pipeline, ProperOnRandomInstancesWithFullLists) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 30; ++t) {
        const Graph g = oracle::random_graph(60, 0.2, rng);
        const auto d = exact_extended_decomposition(g, 0.1);
        const Palette p = sample_palettes_uniform(60, g.max_degree(), g.max_degree() + 1, rng());
        PipelineConfig cfg;
        cfg.check_each_phase = true;
        cfg.strict_list = true;
        const auto r = list_color_pipeline(g, d, p, cfg);
        EXPECT_TRUE(r.report.success);
        EXPECT_TRUE(r.report.list_compliant);
        EXPECT_TRUE(oracle::is_proper(g, r.colors));
        for (Vertex v = 0; v < 60; ++v) EXPECT_NE(r.colored_by[v], ColoredBy::none);
    }
}

TEST(Pipeline, ShortListsStillYieldAProperColoring) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = generate_noisy_cliques(20, 6, 0.02, 20, seed);
        const auto d = exact_extended_decomposition(g, 0.1);
        const Palette p = sample_palettes_uniform(g.num_vertices(), g.max_degree(), 8, seed);
        const auto r = list_color_pipeline(g, d, p, {}, [&g](Vertex v) {
            return std::vector<Vertex>(g.neighbors(v).begin(), g.neighbors(v).end());
        });
        EXPECT_TRUE(r.report.success);
        EXPECT_TRUE(oracle::is_proper(g, r.colors));
        for (Vertex v = 0; v < g.num_vertices(); ++v) {
            EXPECT_GE(r.colors[v], 1u);
            EXPECT_LE(r.colors[v], g.max_degree() + 1);
            if (r.colored_by[v] != ColoredBy::fallback_any) {
                EXPECT_TRUE(p.contains(v, r.colors[v]));
            }
        }
        EXPECT_EQ(r.report.list_compliant, r.report.fallback_any_color == 0);
    }
}

TEST(Pipeline, EachPhaseColorsFromItsOwnBatch) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = generate_noisy_cliques(25, 4, 0.02, 25, seed);
        const auto d = exact_extended_decomposition(g, 0.1);
        const Palette p = sample_palettes_uniform(g.num_vertices(), g.max_degree(), 12, seed);
        PipelineConfig cfg;
        cfg.strict_list = true;
        const auto r = list_color_pipeline(g, d, p, cfg);
        for (Vertex v = 0; v < g.num_vertices(); ++v) {
            const Color c = r.colors[v];
            switch (r.colored_by[v]) {
                case ColoredBy::one_shot:
                case ColoredBy::greedy_rounds: EXPECT_TRUE(p.batch_contains(0, v, c)); break;
                case ColoredBy::colorful_matching: EXPECT_TRUE(p.batch_contains(1, v, c)); break;
                case ColoredBy::palette_matching: EXPECT_TRUE(p.batch_contains(2, v, c)); break;
                case ColoredBy::none: EXPECT_EQ(c, kNoColor); break;
                default: EXPECT_TRUE(p.contains(v, c)); break;
            }
        }
    }
}

TEST(Pipeline, DeterministicForFixedInputs) {
    const Graph g = generate_noisy_cliques(30, 5, 0.02, 30, 8);
    const auto d = exact_extended_decomposition(g, 0.1);
    const Palette p = sample_palettes_uniform(g.num_vertices(), g.max_degree(), 10, 8);
    const auto a = list_color_pipeline(g, d, p, {});
    const auto b = list_color_pipeline(g, d, p, {});
    EXPECT_EQ(a.colors, b.colors);
    EXPECT_EQ(a.colored_by, b.colored_by);
}
