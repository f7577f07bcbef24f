#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "../oracles.hpp"
#include "pscolor/generators.hpp"
#include "pscolor/query_oracle.hpp"
#include "pscolor/random.hpp"
#include "pscolor/stream.hpp"

using namespace pscolor;

TEST(Random, DerivedSeedsAreDeterministicAndDistinct) {
    EXPECT_EQ(derive_seed(7, "palette"), derive_seed(7, "palette"));
    EXPECT_NE(derive_seed(7, "palette"), derive_seed(7, "friend"));
    EXPECT_NE(derive_seed(7, "palette"), derive_seed(8, "palette"));
    EXPECT_NE(derive_seed(7, "x", 1), derive_seed(7, "x", 2));
}

TEST(Random, UniformBelowStaysInRangeAndCoversIt) {
    Rng rng(1);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        auto x = rng.uniform_below(7);
        ASSERT_LT(x, 7u);
        ++hits[x];
    }
    for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

TEST(Random, GeometricSkipHasExpectedMean) {
    Rng rng(2);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) sum += static_cast<double>(rng.geometric_skip(0.25));
    EXPECT_NEAR(sum / 20000, 3.0, 0.15);
    EXPECT_EQ(rng.geometric_skip(1.0), 0u);
}

TEST(Random, ShuffleIsAPermutation) {
    Rng rng(3);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    rng.shuffle(std::span<int>(v));
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Graph, BuildsSortedAdjacency) {
    Graph g(4, {{2, 3}, {0, 1}, {0, 2}});
    EXPECT_EQ(g.num_vertices(), 4u);
    EXPECT_EQ(g.num_edges(), 3u);
    EXPECT_EQ(g.max_degree(), 2u);
    ASSERT_EQ(g.neighbors(0).size(), 2u);
    EXPECT_EQ(g.neighbors(0)[0], 1u);
    EXPECT_EQ(g.neighbors(0)[1], 2u);
    EXPECT_TRUE(g.has_edge(3, 2));
    EXPECT_FALSE(g.has_edge(1, 3));
    EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
}

TEST(Graph, RejectsBadEdges) {
    EXPECT_THROW(Graph(3, {{1, 1}}), InvalidArgument);
    EXPECT_THROW(Graph(3, {{0, 3}}), InvalidArgument);
    EXPECT_THROW(Graph(3, {{0, 1}, {0, 1}}), InvalidArgument);
}

TEST(Graph, EdgeListRoundTrip) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const Graph g = oracle::random_graph(5 + rng() % 30, 0.2, rng);
        std::stringstream s;
        write_edge_list(s, g);
        const Graph h = read_edge_list(s);
        EXPECT_EQ(h.num_vertices(), g.num_vertices());
        EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));
    }
}

TEST(Graph, EdgeListParsingErrors) {
    std::stringstream missing("3 2\n0 1\n");
    EXPECT_THROW(read_edge_list(missing), ParseError);
    std::stringstream garbage("3 1\n0 x\n");
    EXPECT_THROW(read_edge_list(garbage), ParseError);
    std::stringstream comments("# header\n3 1\n\n1 2\n");
    EXPECT_EQ(read_edge_list(comments).num_edges(), 1u);
}

TEST(Graph, InducedSubgraphRelabels) {
    Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
    std::vector<Vertex> keep = {1, 2, 3};
    const Graph h = induced_subgraph(g, keep);
    EXPECT_EQ(h.num_vertices(), 3u);
    EXPECT_EQ(h.num_edges(), 2u);
    EXPECT_TRUE(h.has_edge(0, 1));
    EXPECT_TRUE(h.has_edge(1, 2));
}

TEST(QueryOracle, CountsEachKind) {
    Graph g(4, {{0, 1}, {0, 2}, {1, 2}});
    QueryOracle oracle(g);
    EXPECT_EQ(oracle.degree(0), 2u);
    EXPECT_EQ(oracle.neighbor(0, 1), std::optional<Vertex>(1));
    EXPECT_EQ(oracle.neighbor(0, 2), std::optional<Vertex>(2));
    EXPECT_EQ(oracle.neighbor(0, 3), std::nullopt);
    EXPECT_TRUE(oracle.pair(2, 1));
    EXPECT_FALSE(oracle.pair(3, 0));
    EXPECT_EQ(oracle.counts().degree, 1u);
    EXPECT_EQ(oracle.counts().neighbor, 3u);
    EXPECT_EQ(oracle.counts().pair, 2u);
    EXPECT_EQ(oracle.counts().total(), 6u);
    oracle.reset_counts();
    EXPECT_EQ(oracle.counts().total(), 0u);
    EXPECT_THROW(oracle.degree(4), InvalidArgument);
}

TEST(QueryOracle, PairAnswersMatchGraphWithAndWithoutMatrix) {
    std::mt19937_64 rng(5);
    const Graph small = oracle::random_graph(40, 0.3, rng);
    QueryOracle a(small);
    for (Vertex u = 0; u < 40; ++u) {
        for (Vertex v = 0; v < 40; ++v) {
            if (u != v) {
                ASSERT_EQ(a.pair(u, v), small.has_edge(u, v));
            }
        }
    }
    const Graph big(20000, {{0, 19999}, {5, 6}});
    QueryOracle b(big);
    EXPECT_TRUE(b.pair(19999, 0));
    EXPECT_FALSE(b.pair(0, 5));
}

TEST(Stream, GeneratedStreamReplaysToSource) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
        const Graph g = oracle::random_graph(5 + rng() % 40, 0.15, rng);
        const double churn = (rng() % 5) * 0.25;
        const auto events = to_stream(g, churn, t);
        const Graph h = replay_stream(g.num_vertices(), events);
        EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));
        EXPECT_GE(events.size(), g.num_edges());
    }
}

TEST(Stream, ChurnAddsDeletions) {
    Graph g(30, {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}, {12, 13}, {14, 15}, {16, 17}, {18, 19}});
    const auto events = to_stream(g, 1.0, 1);
    const auto deletes = std::count_if(events.begin(), events.end(),
                                       [](const StreamEvent& e) { return e.kind == StreamEvent::Kind::remove; });
    EXPECT_EQ(deletes, 10);
    EXPECT_EQ(events.size(), 30u);
}

TEST(Stream, ReplayRejectsMalformedStreams) {
    EXPECT_THROW(replay_stream(3, {{StreamEvent::Kind::remove, {0, 1}}}), StreamError);
    EXPECT_THROW(replay_stream(3, {{StreamEvent::Kind::insert, {0, 1}}, {StreamEvent::Kind::insert, {0, 1}}}), StreamError);
    EXPECT_EQ(replay_stream(3, {{StreamEvent::Kind::insert, {0, 1}}}).num_edges(), 1u);
    EXPECT_EQ(replay_stream(3, {{StreamEvent::Kind::insert, {0, 1}}, {StreamEvent::Kind::remove, {0, 1}}}).num_edges(), 0u);
}

TEST(Stream, FileRoundTrip) {
    StreamFile file{4, 2, {{StreamEvent::Kind::insert, {0, 1}}, {StreamEvent::Kind::remove, {0, 1}}, {StreamEvent::Kind::insert, {2, 3}}}};
    std::stringstream s;
    write_stream(s, file);
    const auto back = read_stream(s);
    EXPECT_EQ(back.n, 4u);
    EXPECT_EQ(back.max_degree, 2u);
    EXPECT_EQ(back.events, file.events);
    std::stringstream bad("4 2 1\n* 0 1\n");
    EXPECT_THROW(read_stream(bad), ParseError);
}

TEST(Generators, GnpCappedRespectsCap) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Graph g = generate_gnp_capped(500, 0.1, 20, seed);
        EXPECT_LE(g.max_degree(), 20u);
        EXPECT_GT(g.num_edges(), 3000u);
    }
    EXPECT_THROW(generate_gnp_capped(10, 0.5, 10, 1), InvalidArgument);
}

TEST(Generators, SpecDefaultsProbabilityToDeltaOverN) {
    const Graph g = generate({GeneratorModel::gnp_capped, {{"n", 1000}, {"delta", 32}}, 3});
    EXPECT_EQ(g.max_degree(), 32u);
    EXPECT_NEAR(2.0 * g.num_edges() / 1000.0, 28.0, 4.0);
}

TEST(Generators, RegularLikeDegreesAtMostD) {
    const Graph g = generate_regular_like(200, 6, 2);
    EXPECT_LE(g.max_degree(), 6u);
    EXPECT_GE(g.num_edges(), 560u);
}

TEST(Generators, CliqueCollectionIsDisjointCliques) {
    const Graph g = generate_clique_collection(5, 3);
    EXPECT_EQ(g.num_vertices(), 15u);
    EXPECT_EQ(g.num_edges(), 30u);
    EXPECT_TRUE(g.has_edge(0, 4));
    EXPECT_FALSE(g.has_edge(4, 5));
}

TEST(Generators, HardInstancesHaveDocumentedShape) {
    for (std::size_t root : {2, 3, 5, 8}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const Graph c = generate_coloring_hard(root * root, seed);
            EXPECT_EQ(c.num_vertices(), 2 * root * root);
            EXPECT_EQ(c.max_degree(), root + 1);
        }
    }
    EXPECT_THROW(generate_coloring_hard(10, 1), InvalidArgument);
    const Graph m = generate_matching_hard(12, 1);
    EXPECT_EQ(m.num_vertices(), 24u);
    EXPECT_GT(m.num_edges(), 0u);
    const Graph u = generate_noisy_cliques(10, 4, 0.05, 12, 1);
    EXPECT_EQ(u.num_vertices(), 40u);
    EXPECT_LE(u.max_degree(), 12u);
    for (Vertex v = 1; v < 10; ++v) EXPECT_TRUE(u.has_edge(0, v));
}

TEST(Generators, ParseNames) {
    for (auto m : {GeneratorModel::gnp_capped, GeneratorModel::regular_like, GeneratorModel::clique_collection,
                   GeneratorModel::coloring_hard, GeneratorModel::matching_hard, GeneratorModel::union_noise}) {
        EXPECT_EQ(parse_generator_model(to_string(m)), m);
    }
    EXPECT_THROW(parse_generator_model("nope"), InvalidArgument);
    EXPECT_THROW(generate({GeneratorModel::gnp_capped, {{"n", 10}}, 1}), InvalidArgument);
}

TEST(Generators, SameSeedSameGraph) {
    const GeneratorSpec spec{GeneratorModel::gnp_capped, {{"n", 300}, {"delta", 12}}, 9};
    const Graph a = generate(spec), b = generate(spec);
    EXPECT_TRUE(std::equal(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end()));
}
