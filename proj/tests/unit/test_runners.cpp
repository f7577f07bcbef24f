#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "../oracles.hpp"
#include "pscolor/generators.hpp"
#include "pscolor/harness.hpp"
#include "pscolor/mpc.hpp"
#include "pscolor/offline_runner.hpp"
#include "pscolor/query_runner.hpp"
#include "pscolor/stream_runner.hpp"

using namespace pscolor;

namespace {

StreamRunConfig stream_config(std::size_t n, std::size_t delta, std::uint64_t seed) {
    StreamRunConfig cfg;
    cfg.n = n;
    cfg.max_degree = delta;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST(OfflineRunner, ColorsProperlyFromBothSources) {
    for (auto source : {DecompositionSource::exact, DecompositionSource::sampled}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const Graph g = generate_gnp_capped(400, 0.05, 24, seed);
            OfflineConfig cfg;
            cfg.source = source;
            cfg.seed = seed;
            const auto run = run_offline(g, cfg);
            EXPECT_TRUE(run.report.success);
            EXPECT_TRUE(verify_coloring(g, run.colors, g.max_degree()).ok());
            EXPECT_LE(run.conflict.edges, g.num_edges());
        }
    }
    EXPECT_EQ(parse_decomposition_source(to_string(DecompositionSource::exact)), DecompositionSource::exact);
    EXPECT_THROW(parse_decomposition_source("guess"), InvalidArgument);
}

TEST(OfflineRunner, DeclaredDegreeBelowActualIsRejected) {
    const Graph g = generate_clique_collection(5, 2);
    OfflineConfig cfg;
    cfg.max_degree = 2;
    EXPECT_THROW(run_offline(g, cfg), DegreeBoundExceeded);
}

TEST(StreamRunner, EmptyGraphUsesColorOne) {
    const auto r = run_stream({}, stream_config(10, 0, 1));
    ASSERT_EQ(r.run.colors.size(), 10u);
    for (Color c : r.run.colors) EXPECT_EQ(c, 1u);
    EXPECT_EQ(r.resources.events_consumed, 0u);
}

TEST(StreamRunner, TriangleWithReinsertion) {
    std::vector<StreamEvent> events = {
        {StreamEvent::Kind::insert, {0, 1}}, {StreamEvent::Kind::insert, {1, 2}},
        {StreamEvent::Kind::remove, {0, 1}}, {StreamEvent::Kind::insert, {0, 2}},
        {StreamEvent::Kind::insert, {0, 1}}};
    const auto r = run_stream(events, stream_config(3, 2, 2));
    const Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
    EXPECT_TRUE(verify_coloring(k3, r.run.colors, 2).ok());
    EXPECT_EQ(r.resources.events_consumed, 5u);
    EXPECT_EQ(r.resources.pass_count, 1u);
}

TEST(StreamRunner, SpaceIsCommittedBeforeTheFirstEvent) {
    for (auto backend : {SamplerBackend::ideal, SamplerBackend::sketch}) {
        const Graph g = generate_gnp_capped(300, 0.05, 16, 3);
        auto cfg = stream_config(300, 16, 3);
        cfg.backend = backend;
        const auto r = run_stream(to_stream(g, 0.5, 3), cfg);
        EXPECT_TRUE(verify_coloring(g, r.run.colors, 16).ok());
        EXPECT_GT(r.resources.words_at_first_event, 0u);
        EXPECT_EQ(r.resources.words_at_first_event, r.resources.words_at_stream_end);
        EXPECT_GE(r.resources.peak_words, r.resources.words_at_stream_end);
        EXPECT_EQ(r.resources.breakdown.at("degree_counters"), 300u);
        EXPECT_GE(r.resources.attempts, 1u);
    }
}

TEST(StreamRunner, RejectsBadStreams) {
    std::vector<StreamEvent> star;
    for (Vertex v = 1; v < 5; ++v) star.push_back({StreamEvent::Kind::insert, {0, v}});
    EXPECT_THROW(run_stream(star, stream_config(5, 3, 1)), DegreeBoundExceeded);
    EXPECT_THROW(run_stream({{StreamEvent::Kind::remove, {0, 1}}}, stream_config(5, 3, 1)), StreamError);
    EXPECT_THROW(run_stream({{StreamEvent::Kind::insert, {0, 9}}}, stream_config(5, 3, 1)), StreamError);
    EXPECT_EQ(attempt_seed(5, 0), 5u);
    EXPECT_NE(attempt_seed(5, 1), 5u);
}

TEST(QueryRunner, NoEdgesNoNeighborQueries) {
    const Graph g(8);
    QueryOracle oracle(g);
    const auto r = run_query_model(oracle, 8, 0, {});
    EXPECT_EQ(r.resources.neighbor_q, 0u);
    for (Color c : r.run.colors) EXPECT_EQ(c, 1u);
}

TEST(QueryRunner, TriangleUsesSixNeighborQueries) {
    const Graph g(3, {{0, 1}, {0, 2}, {1, 2}});
    QueryOracle oracle(g);
    EXPECT_EQ(greedy_small_delta(oracle, 3), (std::vector<Color>{1, 2, 3}));
    EXPECT_EQ(oracle.counts().neighbor, 6u);
    EXPECT_EQ(oracle.counts().pair, 0u);
    EXPECT_EQ(oracle.counts().degree, 3u);
    const Graph empty(5);
    QueryOracle empty_oracle(empty);
    EXPECT_EQ(greedy_small_delta(empty_oracle, 5), std::vector<Color>(5, 1));
    EXPECT_EQ(empty_oracle.counts().neighbor, 0u);
}

TEST(QueryRunner, GreedyBranchReadsEachEdgeTwice) {
    EXPECT_EQ(greedy_branch_limit(100), 10u);
    EXPECT_EQ(greedy_branch_limit(99), 9u);
    EXPECT_EQ(greedy_branch_limit(100, 2.0), 20u);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Graph g = generate_gnp_capped(900, 0.02, 30, seed);
        QueryOracle oracle(g);
        QueryRunConfig cfg;
        cfg.count_degree_queries = false;
        const auto r = run_query_model(oracle, 900, 30, cfg, g.num_edges());
        EXPECT_EQ(r.resources.branch, QueryBranch::greedy);
        EXPECT_EQ(r.resources.neighbor_q, 2 * g.num_edges());
        EXPECT_EQ(r.resources.total, 2 * g.num_edges());
        EXPECT_EQ(r.resources.baseline_m, g.num_edges());
        EXPECT_TRUE(verify_coloring(g, r.run.colors, 30).ok());
    }
}

TEST(QueryRunner, SparsificationPlansPairsFromThePalette) {
    const Graph g = generate_gnp_capped(200, 0.1, 40, 4);
    QueryOracle oracle(g);
    QueryRunConfig cfg;
    cfg.seed = 4;
    const auto r = run_query_model(oracle, 200, 40, cfg);
    EXPECT_EQ(r.resources.branch, QueryBranch::sparsification);
    const ColorClasses classes(r.run.palette);
    EXPECT_EQ(r.resources.conflict_pair_q, planned_pair_queries(r.run.palette, classes).size());
    EXPECT_EQ(r.resources.pair_q, r.resources.conflict_pair_q + r.resources.decomposition_pair_q);
    EXPECT_TRUE(verify_coloring(g, r.run.colors, 40).ok());
}

TEST(MpcSimulator, EmptyRoundAndCapViolation) {
    MpcSimulator sim(4, 10);
    sim.run_round([](MachineId, const std::vector<Message>&, std::uint64_t& state) {
        state = 1;
        return std::vector<Message>{};
    });
    EXPECT_EQ(sim.rounds(), 1u);
    try {
        sim.run_round([](MachineId m, const std::vector<Message>&, std::uint64_t& state) {
            state = m == 2 ? 11 : 0;
            return std::vector<Message>{};
        });
        FAIL() << "cap not enforced";
    } catch (const MemoryCapExceeded& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("machine 2"), std::string::npos) << what;
        EXPECT_NE(what.find("round 2"), std::string::npos) << what;
    }
}

TEST(MpcSimulator, DeliversMessagesAndLogsWords) {
    MpcSimulator sim(3, 100);
    sim.run_round([](MachineId m, const std::vector<Message>&, std::uint64_t&) {
        return std::vector<Message>{{m, 0, {m, m}}};
    });
    ASSERT_EQ(sim.inbox(0).size(), 3u);
    EXPECT_EQ(sim.inbox(1).size(), 0u);
    EXPECT_EQ(sim.logs().size(), 1u);
    std::uint64_t out = 0;
    for (const auto& l : sim.logs()[0].machines) out += l.out_words;
    EXPECT_EQ(out, 9u);
}

TEST(MpcSimulator, DetectsOrderDependentSteps) {
    MpcSimulator sim(3, 100);
    int calls = 0;
    EXPECT_THROW(sim.run_round([&calls](MachineId, const std::vector<Message>&, std::uint64_t&) {
        return std::vector<Message>{{0, 1, {static_cast<std::uint64_t>(calls++)}}};
    }),
                 std::logic_error);
}

TEST(MpcRunner, TriangleOnOneMachine) {
    const Graph g(3, {{0, 1}, {0, 2}, {1, 2}});
    MpcConfig cfg;
    cfg.machine_count = 1;
    const auto r = run_mpc(g, cfg);
    EXPECT_TRUE(verify_coloring(g, r.run.colors, 2).ok());
    EXPECT_EQ(r.mpc.rounds, 1u);
}

TEST(MpcRunner, PublicModeMatchesOffline) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Graph g = generate_noisy_cliques(30, 6, 0.01, 30, seed);
        MpcConfig cfg;
        cfg.seed = seed;
        cfg.decomposition.eps = 0.5;
        OfflineConfig off;
        off.seed = seed;
        off.decomposition.eps = 0.5;
        const auto a = run_mpc(g, cfg);
        const auto b = run_offline(g, off);
        EXPECT_EQ(a.run.colors, b.colors);
        EXPECT_EQ(a.run.decomposition.cliques, b.decomposition.cliques);
        EXPECT_EQ(a.mpc.rounds, 1u);
        EXPECT_EQ(a.mpc.cap_violations, 0u);
    }
}

TEST(MpcRunner, PrivateModeWithinThreeRounds) {
    const Graph g = generate_gnp_capped(200, 0.05, 12, 7);
    MpcConfig cfg;
    cfg.public_randomness = false;
    cfg.machine_count = 4;
    cfg.seed = 7;
    const auto r = run_mpc(g, cfg);
    EXPECT_LE(r.mpc.rounds, 3u);
    EXPECT_EQ(r.mpc.machines, 4u + 1 + 200);
    EXPECT_TRUE(verify_coloring(g, r.run.colors, 12).ok());
}

TEST(MpcRunner, PartitionHookAndLogs) {
    const Graph g = generate_gnp_capped(100, 0.05, 8, 2);
    MpcConfig cfg;
    cfg.machine_count = 3;
    cfg.partition_hook = [](std::size_t, const Edge& e) { return static_cast<std::size_t>(e.u % 3); };
    const auto r = run_mpc(g, cfg);
    EXPECT_TRUE(verify_coloring(g, r.run.colors, 8).ok());
    EXPECT_EQ(r.mpc.round_log.size(), r.mpc.rounds);
    EXPECT_LE(r.mpc.max_words, r.mpc.memory_cap);
    EXPECT_EQ(default_memory_cap(1), 64u);
    EXPECT_EQ(default_memory_cap(1000),
              static_cast<std::uint64_t>(std::ceil(8 * 1000 * std::log(1000.0) * std::log(1000.0))));
}

TEST(MpcRunner, TinyCapIsReported) {
    const Graph g = generate_gnp_capped(200, 0.05, 12, 7);
    MpcConfig cfg;
    cfg.machine_count = 1;
    cfg.memory_cap = 100;
    EXPECT_THROW(run_mpc(g, cfg), MemoryCapExceeded);
}

TEST(Harness, VerifyCatchesEachDefect) {
    const Graph g(4, {{0, 1}, {1, 2}});
    std::vector<Color> colors = {1, 1, 0, 9};
    const auto r = verify_coloring(g, colors, 2);
    EXPECT_EQ(r.improper_edges, (std::vector<Edge>{{0, 1}}));
    EXPECT_EQ(r.uncolored, (std::vector<Vertex>{2}));
    EXPECT_EQ(r.out_of_range, (std::vector<Vertex>{3}));
    EXPECT_FALSE(r.ok());
    const Palette p = sample_palettes_uniform(4, 2, 1, 1);
    std::vector<Color> off(4);
    for (Vertex v = 0; v < 4; ++v) off[v] = p.list(v)[0] % 3 + 1;
    EXPECT_EQ(verify_coloring(Graph(4), off, 2, &p, true).off_list.size(), 4u);
    EXPECT_TRUE(verify_coloring(Graph(4), off, 2, &p, false).ok());
}

TEST(Harness, BaselineGreedyBounds) {
    const Graph k = generate_clique_collection(7, 2);
    const auto colors = baseline_greedy(k);
    EXPECT_TRUE(verify_coloring(k, colors, 6).ok());
    EXPECT_EQ(*std::max_element(colors.begin(), colors.end()), 7u);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < 5; ++u) {
        for (Vertex v = 5; v < 10; ++v) edges.push_back({u, v});
    }
    const auto bip = baseline_greedy(Graph(10, edges));
    EXPECT_EQ(*std::max_element(bip.begin(), bip.end()), 2u);
}

TEST(Harness, JsonRoundTripAndNames) {
    const std::vector<Color> colors = {1, 3, 2};
    const auto j = coloring_json(colors);
    EXPECT_EQ(coloring_from_json(j), colors);
    EXPECT_EQ(coloring_from_json(nlohmann::json{{"coloring", j}}), colors);
    EXPECT_THROW(coloring_from_json(nlohmann::json{{"other", 1}}), ParseError);

    const Graph g = generate_gnp_capped(100, 0.05, 8, 1);
    OfflineConfig cfg;
    const auto run = run_offline(g, cfg);
    const auto report = to_json(run.report);
    EXPECT_TRUE(report.contains("success"));
    EXPECT_TRUE(report.contains("fallback_any_color"));
    const auto lists = palette_json(run.palette);
    EXPECT_EQ(lists["batches"].size(), 100u);
    EXPECT_EQ(to_json(run.decomposition)["cliques"].size(), run.decomposition.cliques.size());
    EXPECT_EQ(to_string(ColoredBy::fallback_any), "fallback_any");

    for (auto m : {RunMode::offline, RunMode::stream, RunMode::query, RunMode::mpc}) {
        EXPECT_EQ(parse_run_mode(to_string(m)), m);
    }
    EXPECT_THROW(parse_run_mode("batch"), InvalidArgument);
}

TEST(Harness, BenchSmokeWritesCsv) {
    const auto cases = bench_preset("smoke");
    ASSERT_FALSE(cases.empty());
    const auto rows = run_bench(cases, 1, 5, 2);
    EXPECT_EQ(rows.size(), cases.size());
    for (const auto& row : rows) EXPECT_TRUE(row.valid) << row.instance << " " << row.error;
    std::ostringstream out;
    write_bench_csv(out, rows);
    const std::string text = out.str();
    std::string header;
    for (const auto& c : bench_csv_columns()) header += (header.empty() ? "" : ",") + c;
    EXPECT_EQ(text.substr(0, text.find('\n')), header);
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), rows.size() + 1);
    EXPECT_THROW(bench_preset("huge"), InvalidArgument);
}
