#include <gtest/gtest.h>

#include <random>
#include <set>

#include "../oracles.hpp"
#include "pscolor/decomposition.hpp"
#include "pscolor/generators.hpp"
#include "pscolor/stream.hpp"

using namespace pscolor;

namespace {

SampledDecompositionConfig full_rates(double eps) {
    SampledDecompositionConfig cfg;
    cfg.eps = eps;
    cfg.friend_rate = 1.0;
    cfg.dense_rate = 1.0;
    cfg.hs_rate = 1.0;
    return cfg;
}

}  // namespace

TEST(Decomposition, CommonNeighborCountsMatchBruteForce) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 15; ++t) {
        const Graph g = oracle::random_graph(30, 0.3, rng);
        const auto counts = common_neighbor_counts(g);
        ASSERT_EQ(counts.size(), g.num_edges());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            EXPECT_EQ(counts[i], oracle::common_neighbors(g, g.edges()[i].u, g.edges()[i].v));
        }
    }
}

TEST(Decomposition, FriendEdgesAndDenseVerticesMatchDefinition) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 15; ++t) {
        const Graph g = oracle::random_graph(25, 0.6, rng);
        const double eps = 0.3;
        const double delta = static_cast<double>(g.max_degree());
        const auto friends = exact_friend_edges(g, eps);
        std::set<Edge> expected;
        for (const auto& e : g.edges()) {
            if (static_cast<double>(oracle::common_neighbors(g, e.u, e.v)) >= (1 - eps) * delta) expected.insert(e);
        }
        EXPECT_EQ(std::set<Edge>(friends.begin(), friends.end()), expected);
        std::vector<std::size_t> friend_degree(g.num_vertices(), 0);
        for (const auto& e : expected) {
            ++friend_degree[e.u];
            ++friend_degree[e.v];
        }
        std::vector<Vertex> dense;
        for (Vertex v = 0; v < g.num_vertices(); ++v) {
            if (static_cast<double>(friend_degree[v]) >= (1 - eps) * delta) dense.push_back(v);
        }
        EXPECT_EQ(exact_dense_vertices(g, eps), dense);
    }
}

TEST(Decomposition, ExactFindsDisjointCliques) {
    const Graph g = generate_clique_collection(21, 6);
    const auto d = exact_extended_decomposition(g, 0.1);
    EXPECT_TRUE(d.sparse.empty());
    ASSERT_EQ(d.cliques.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(d.cliques[i].size(), 21u);
        EXPECT_EQ(d.cliques[i].front(), i * 21);
        EXPECT_DOUBLE_EQ(d.stats[i].avg_complement_degree, 0.0);
        EXPECT_EQ(d.stats[i].max_outside_neighbors, 0u);
    }
    EXPECT_TRUE(verify_decomposition(g, d, 0.1).ok());
}

TEST(Decomposition, ExactOnSparseGraphIsAllSparse) {
    const Graph g = generate_regular_like(300, 20, 3);
    const auto d = exact_extended_decomposition(g, 0.1);
    EXPECT_TRUE(d.cliques.empty());
    EXPECT_EQ(d.sparse.size(), 300u);
    EXPECT_TRUE(verify_decomposition(g, d, 0.1).ok());
}

TEST(Decomposition, DegenerateGraphIsAllSparse) {
    const Graph g(6, {{0, 1}, {2, 3}});
    const auto d = exact_extended_decomposition(g, 0.1);
    EXPECT_EQ(d.sparse.size(), 6u);
    EXPECT_TRUE(d.cliques.empty());
}

TEST(Decomposition, ExactSatisfiesBoundsOnRandomInstances) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = generate_noisy_cliques(16, 5, 0.02, 16, seed);
        const auto d = exact_extended_decomposition(g, 0.1);
        const auto report = verify_decomposition(g, d, 0.1);
        EXPECT_TRUE(report.ok()) << (report.ok() ? "" : report.violations.front());
    }
}

TEST(Decomposition, VerifierDetectsInjectedViolations) {
    const Graph g = generate_clique_collection(21, 3);
    auto d = exact_extended_decomposition(g, 0.1);

    auto split = d;
    split.cliques[0].resize(5);  // too small, and the removed vertices are not sparse
    auto moved = make_decomposition(g, 0.1, split.cliques);
    EXPECT_FALSE(verify_decomposition(g, moved, 0.1).ok());

    auto merged = d.cliques;
    merged[0].insert(merged[0].end(), merged[1].begin(), merged[1].end());
    merged.erase(merged.begin() + 1);
    EXPECT_FALSE(verify_decomposition(g, make_decomposition(g, 0.1, merged), 0.1).ok());
}

TEST(Decomposition, SparseBoundMatchesNeighborhoodCount) {
    const Graph k9 = generate_clique_collection(9, 1);
    EXPECT_EQ(neighborhood_edge_count(k9, 0), 28u);
    // eps D < 1 leaves no missing edge to demand, so a full neighborhood is allowed
    const auto d = make_decomposition(k9, 0.1, {});
    EXPECT_TRUE(verify_decomposition(k9, d, 0.1).ok());
    EXPECT_FALSE(verify_decomposition(k9, make_decomposition(k9, 0.5, {}), 0.5).ok());
    EXPECT_TRUE(verify_decomposition(k9, exact_extended_decomposition(k9, 0.5), 0.5).ok());
}

TEST(Decomposition, FriendOracleThresholdAndBatching) {
    const Graph g = generate_clique_collection(11, 2);
    const auto oracle = build_friend_oracle(g, 10, 0.01, 1, 1.0);
    EXPECT_TRUE(oracle.covers_all_vertices());
    EXPECT_DOUBLE_EQ(oracle.threshold(), (1 - 0.015) * 10);
    EXPECT_EQ(oracle.common_in_sample(0, 1), 9u);
    EXPECT_FALSE(oracle.query(0, 1));
    const auto loose = build_friend_oracle(g, 10, 0.1, 1, 1.0);
    EXPECT_TRUE(loose.query(0, 1));
    EXPECT_FALSE(loose.query(0, 11));
    std::vector<Edge> pairs = {{0, 1}, {0, 11}, {12, 13}};
    EXPECT_EQ(loose.query_all(pairs), (std::vector<char>{1, 0, 1}));
    EXPECT_EQ(loose.sample_graph().num_edges(), g.num_edges());
}

TEST(Decomposition, SampleSizesFollowFormulas) {
    EXPECT_EQ(stream_dense_sample_count(100, 0.5), static_cast<std::uint64_t>(std::ceil(100 * 100 * std::log(100.0) / 0.25)));
    EXPECT_EQ(stream_hs_sample_count(100, 0.5, 2.0), static_cast<std::uint64_t>(std::ceil(20 * 100 * std::log(100.0) / 0.25)));
    EXPECT_DOUBLE_EQ(hs_sample_rate(100, 1000000, 1.0), 4 * std::log(100.0) / 1000000);
    EXPECT_DOUBLE_EQ(friend_sample_rate(100, 10, 0.1), 1.0);
    EXPECT_FALSE(hash_selects({1, 2}, 0.0, 1));
    EXPECT_TRUE(hash_selects({1, 2}, 1.0, 1));
    const auto s = sample_friend_set(10000, 0.1, 4);
    EXPECT_NEAR(static_cast<double>(s.size()), 1000.0, 120.0);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
}

TEST(Decomposition, SampledSourcesAgreeWhenEverythingIsRead) {
    const Graph g = generate_noisy_cliques(40, 4, 0.01, 40, 5);
    const auto cfg = full_rates(0.5);
    const auto offline = sampled_decomposition_offline(g, g.max_degree(), cfg, 9);
    QueryOracle oracle(g);
    const auto queried = sampled_decomposition_queries(oracle, g.max_degree(), cfg, 9);
    EXPECT_EQ(offline.decomposition.cliques, queried.decomposition.cliques);
    EXPECT_EQ(offline.decomposition.sparse, queried.decomposition.sparse);
    EXPECT_EQ(offline.decomposition.cliques.size(), 4u);
    EXPECT_TRUE(offline.dense_exhaustive);
    EXPECT_TRUE(offline.hs_exhaustive);
    EXPECT_EQ(offline.knowledge.num_edges(), g.num_edges());

    for (auto backend : {SamplerBackend::ideal, SamplerBackend::sketch}) {
        auto stream_cfg = cfg;
        stream_cfg.dense_samples = 20 * g.num_edges();
        stream_cfg.hs_samples = 2 * g.num_edges();
        StreamDecompositionSketch sketch(g.num_vertices(), g.max_degree(), stream_cfg, backend, 9);
        for (const auto& e : to_stream(g, 0.3, 2)) sketch.process(e);
        const auto streamed = sketch.finalize();
        EXPECT_EQ(streamed.decomposition.cliques, offline.decomposition.cliques);
    }
}

TEST(Decomposition, OfflineReadsOnlySelectedEdges) {
    const Graph g = generate_noisy_cliques(60, 4, 0.01, 60, 7);
    SampledDecompositionConfig cfg;
    cfg.eps = 0.5;
    cfg.friend_rate = 0.2;
    cfg.dense_rate = 0.3;
    cfg.hs_rate = 0.3;
    const auto selection = offline_edge_selection(g.num_vertices(), g.max_degree(), cfg, 3);
    std::vector<Edge> kept;
    for (const auto& e : g.edges()) {
        if (selection.relevant(e)) kept.push_back(e);
    }
    EXPECT_LT(kept.size(), g.num_edges());
    const Graph restricted(g.num_vertices(), kept);
    const auto a = sampled_decomposition_offline(g, g.max_degree(), cfg, 3);
    const auto b = sampled_decomposition_offline(restricted, g.max_degree(), cfg, 3);
    EXPECT_EQ(a.decomposition.cliques, b.decomposition.cliques);
    EXPECT_EQ(a.decomposition.sparse, b.decomposition.sparse);
}

TEST(Decomposition, DenseSetGrowsWithEps) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        const Graph g = oracle::random_graph(30, 0.5 + 0.4 * static_cast<double>(rng() % 100) / 100.0, rng);
        std::vector<Vertex> previous;
        for (double eps : {0.05, 0.1, 0.2, 0.3, 0.5}) {
            const auto dense = exact_dense_vertices(g, eps);
            EXPECT_TRUE(std::includes(dense.begin(), dense.end(), previous.begin(), previous.end()));
            previous = dense;
        }
    }
}

TEST(Decomposition, SampledSparseVerticesAreNotDense) {
    int clean = 0;
    const int runs = 20;
    for (int seed = 1; seed <= runs; ++seed) {
        const Graph g = generate_noisy_cliques(40, 5, 0.01, 40, static_cast<std::uint64_t>(seed));
        SampledDecompositionConfig cfg;
        cfg.eps = 0.5;
        const auto d = sampled_decomposition_offline(g, g.max_degree(), cfg, static_cast<std::uint64_t>(seed));
        const auto dense = exact_dense_vertices(g, cfg.delta() / 4);
        bool ok = true;
        for (Vertex v : d.decomposition.sparse) ok &= !std::binary_search(dense.begin(), dense.end(), v);
        clean += ok;
    }
    EXPECT_GE(clean, runs * 95 / 100);
}
