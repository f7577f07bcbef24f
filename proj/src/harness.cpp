#include "pscolor/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "pscolor/random.hpp"

namespace pscolor {

using nlohmann::json;

VerificationReport verify_coloring(const Graph& g, std::span<const Color> colors, std::optional<std::size_t> max_degree,
                                   const Palette* palette, bool strict_list) {
    if (colors.size() != g.num_vertices()) {
        throw InvalidArgument("coloring has " + std::to_string(colors.size()) + " entries for " +
                              std::to_string(g.num_vertices()) + " vertices");
    }
    const std::size_t limit = max_degree.value_or(g.max_degree()) + 1;
    VerificationReport report;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        const Color c = colors[v];
        if (c == kNoColor) {
            report.uncolored.push_back(v);
            continue;
        }
        if (c > limit) report.out_of_range.push_back(v);
        if (strict_list && palette != nullptr && !palette->contains(v, c)) report.off_list.push_back(v);
    }
    for (const auto& e : g.edges()) {
        if (colors[e.u] != kNoColor && colors[e.u] == colors[e.v]) report.improper_edges.push_back(e);
    }
    return report;
}

std::vector<Color> baseline_greedy(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<Color> colors(n, kNoColor);
    std::vector<std::size_t> mark(g.max_degree() + 2, n);
    for (Vertex v = 0; v < n; ++v) {
        for (Vertex w : g.neighbors(v)) {
            if (colors[w] != kNoColor) mark[colors[w]] = v;
        }
        Color c = 1;
        while (mark[c] == v) ++c;
        colors[v] = c;
    }
    return colors;
}

std::string to_string(ColoredBy how) {
    switch (how) {
    case ColoredBy::none: return "none";
    case ColoredBy::one_shot: return "one_shot";
    case ColoredBy::greedy_rounds: return "greedy_rounds";
    case ColoredBy::colorful_matching: return "colorful_matching";
    case ColoredBy::palette_matching: return "palette_matching";
    case ColoredBy::fallback_list: return "fallback_list";
    case ColoredBy::fallback_local: return "fallback_local";
    case ColoredBy::fallback_any: return "fallback_any";
    }
    return "none";
}

json to_json(const RunReport& r) {
    return {
        {"n", r.n},
        {"max_degree", r.max_degree},
        {"degenerate", r.degenerate},
        {"sparse_vertices", r.sparse_vertices},
        {"one_shot_colored", r.one_shot_colored},
        {"greedy_rounds", r.greedy_rounds},
        {"greedy_colored", r.greedy_colored},
        {"phase1_residual", r.phase1_residual},
        {"cliques", r.cliques},
        {"colorful_pairs", r.colorful_pairs},
        {"colorful_target_total", r.colorful_target_total},
        {"short_cliques", r.short_cliques},
        {"phase3_uncolored", r.phase3_uncolored},
        {"phase3_matched", r.phase3_matched},
        {"phase3_residual", r.phase3_residual},
        {"cliques_saturated", r.cliques_saturated},
        {"fallback_list_greedy", r.fallback_list_greedy},
        {"fallback_local_search", r.fallback_local_search},
        {"fallback_any_color", r.fallback_any_color},
        {"fallback_failed", r.fallback_failed},
        {"list_compliant", r.list_compliant},
        {"success", r.success},
        {"wall_ms", r.wall_ms},
    };
}

json to_json(const VerificationReport& r) {
    json edges = json::array();
    for (const auto& e : r.improper_edges) edges.push_back({e.u, e.v});
    return {{"ok", r.ok()},
            {"improper_edges", edges},
            {"uncolored", r.uncolored},
            {"out_of_range", r.out_of_range},
            {"off_list", r.off_list}};
}

json to_json(const StreamResourceReport& r) {
    return {{"peak_words", r.peak_words},
            {"words_at_first_event", r.words_at_first_event},
            {"words_at_stream_end", r.words_at_stream_end},
            {"breakdown", r.breakdown},
            {"pass_count", r.pass_count},
            {"events_consumed", r.events_consumed},
            {"attempts", r.attempts},
            {"failures", r.failures},
            {"conflict_k", r.conflict_k},
            {"friend_sample_size", r.friend_sample_size}};
}

json to_json(const QueryResourceReport& r) {
    return {{"branch", r.branch == QueryBranch::greedy ? "greedy" : "sparsification"},
            {"degree_q", r.degree_q},
            {"neighbor_q", r.neighbor_q},
            {"pair_q", r.pair_q},
            {"conflict_pair_q", r.conflict_pair_q},
            {"decomposition_pair_q", r.decomposition_pair_q},
            {"fallback_neighbor_q", r.fallback_neighbor_q},
            {"total", r.total},
            {"baseline_m", r.baseline_m}};
}

json to_json(const MpcReport& r) {
    json rounds = json::array();
    for (const auto& round : r.round_log) {
        json machines = json::array();
        for (const auto& m : round.machines) {
            machines.push_back(
                {{"machine", m.machine}, {"in_words", m.in_words}, {"out_words", m.out_words}, {"state_words", m.state_words}});
        }
        rounds.push_back({{"round", round.round}, {"machines", machines}});
    }
    return {{"rounds", r.rounds},
            {"memory_cap", r.memory_cap},
            {"max_words", r.max_words},
            {"cap_violations", r.cap_violations},
            {"machines", r.machines},
            {"coordinator_in_words", r.coordinator_in_words},
            {"forwarded_edges", r.forwarded_edges},
            {"round_log", rounds}};
}

json to_json(const HssDecomposition& d) {
    json stats = json::array();
    for (const auto& s : d.stats) {
        stats.push_back({{"size", s.size},
                         {"avg_complement_degree", s.avg_complement_degree},
                         {"max_outside_neighbors", s.max_outside_neighbors},
                         {"max_inside_non_neighbors", s.max_inside_non_neighbors}});
    }
    return {{"eps", d.eps}, {"sparse", d.sparse}, {"cliques", d.cliques}, {"stats", stats}};
}

json palette_json(const Palette& palette) {
    json lists = json::array();
    for (Vertex v = 0; v < palette.num_vertices(); ++v) {
        json batches = json::array();
        for (std::size_t b = 0; b < 3; ++b) {
            auto batch = palette.batch(b, v);
            batches.push_back(std::vector<Color>(batch.begin(), batch.end()));
        }
        lists.push_back(batches);
    }
    const auto& p = palette.params();
    return {{"max_degree", p.max_degree},
            {"mode", p.mode == PaletteMode::bernoulli ? "bernoulli" : p.mode == PaletteMode::uniform ? "uniform" : "explicit"},
            {"list_size", p.list_size},
            {"alpha", p.alpha},
            {"eps", p.eps},
            {"probability", p.probability},
            {"all_colors", p.all_colors},
            {"batches", lists}};
}

json coloring_json(std::span<const Color> colors) { return std::vector<Color>(colors.begin(), colors.end()); }

std::vector<Color> coloring_from_json(const json& j) {
    if (j.is_object() && !j.contains("coloring")) throw ParseError("object has no \"coloring\" field");
    const json& arr = j.is_object() ? j.at("coloring") : j;
    if (!arr.is_array()) throw ParseError("coloring must be a JSON array of colors");
    std::vector<Color> colors;
    colors.reserve(arr.size());
    for (const auto& c : arr) {
        if (!c.is_number_unsigned()) throw ParseError("coloring entries must be non-negative integers");
        colors.push_back(c.get<Color>());
    }
    return colors;
}

RunMode parse_run_mode(const std::string& name) {
    if (name == "offline") return RunMode::offline;
    if (name == "stream") return RunMode::stream;
    if (name == "query") return RunMode::query;
    if (name == "mpc") return RunMode::mpc;
    throw InvalidArgument("unknown mode '" + name + "' (expected offline, stream, query or mpc)");
}

std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::offline: return "offline";
    case RunMode::stream: return "stream";
    case RunMode::query: return "query";
    case RunMode::mpc: return "mpc";
    }
    return "offline";
}

namespace {

GeneratorSpec gnp(std::size_t n, std::size_t delta) {
    return {GeneratorModel::gnp_capped, {{"n", static_cast<double>(n)}, {"delta", static_cast<double>(delta)}}, 0};
}

GeneratorSpec cliques(std::size_t size, std::size_t count) {
    return {GeneratorModel::clique_collection, {{"size", static_cast<double>(size)}, {"count", static_cast<double>(count)}}, 0};
}

}  // namespace

std::vector<BenchCase> bench_preset(const std::string& name) {
    std::vector<BenchCase> cases;
    auto add = [&](int criterion, std::string instance, RunMode mode, GeneratorSpec spec) -> BenchCase& {
        BenchCase c;
        c.criterion = criterion;
        c.instance = std::move(instance);
        c.mode = mode;
        c.generator = std::move(spec);
        cases.push_back(std::move(c));
        return cases.back();
    };
    if (name == "smoke") {
        add(0, "gnp_300_24", RunMode::offline, gnp(300, 24));
        add(0, "gnp_300_24", RunMode::stream, gnp(300, 24)).churn = 0.2;
        add(0, "gnp_400_40", RunMode::query, gnp(400, 40));
        add(0, "gnp_300_24", RunMode::mpc, gnp(300, 24)).machines = 4;
        add(0, "cliques_32x4", RunMode::offline, cliques(32, 4)).strict_list = true;
        return cases;
    }
    if (name == "acceptance") {
        add(1, "gnp_2000_128", RunMode::offline, gnp(2000, 128));
        add(2, "clique_256", RunMode::offline, cliques(256, 1)).strict_list = true;
        add(3, "gnp_4000_200", RunMode::offline, gnp(4000, 200));
        auto& k5 = add(4, "k5_x10000", RunMode::offline, cliques(5, 10000));
        k5.palette.list_size = 3;
        k5.strict_list = true;
        add(5, "gnp_5000_256", RunMode::stream, gnp(5000, 256)).churn = 0.2;
        auto& sketch = add(5, "gnp_5000_256", RunMode::stream, gnp(5000, 256));
        sketch.churn = 0.2;
        sketch.backend = SamplerBackend::sketch;
        add(6, "gnp_10000_200", RunMode::query, gnp(10000, 200));
        add(7, "gnp_2000_128", RunMode::mpc, gnp(2000, 128));
        add(7, "gnp_2000_128", RunMode::mpc, gnp(2000, 128)).public_randomness = false;
        return cases;
    }
    throw InvalidArgument("unknown preset '" + name + "' (expected smoke or acceptance)");
}

BenchRow run_bench_case(const BenchCase& c, std::uint64_t seed) {
    BenchRow row;
    row.criterion = c.criterion;
    row.instance = c.instance;
    row.mode = to_string(c.mode);
    if (c.mode == RunMode::stream) row.mode += c.backend == SamplerBackend::sketch ? ":sketch" : ":ideal";
    if (c.mode == RunMode::mpc) row.mode += c.public_randomness ? ":public" : ":private";
    row.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        GeneratorSpec spec = c.generator;
        spec.seed = seed;
        const Graph g = generate(spec);
        row.n = g.num_vertices();
        row.delta = g.max_degree();
        row.m = g.num_edges();
        PipelineConfig pipeline;
        pipeline.strict_list = c.strict_list;
        ColoringRun run;
        switch (c.mode) {
        case RunMode::offline: {
            OfflineConfig cfg;
            cfg.palette = c.palette;
            cfg.pipeline = pipeline;
            cfg.seed = seed;
            run = run_offline(g, cfg);
            break;
        }
        case RunMode::stream: {
            StreamRunConfig cfg;
            cfg.n = g.num_vertices();
            cfg.max_degree = g.max_degree();
            cfg.palette = c.palette;
            cfg.backend = c.backend;
            cfg.pipeline = pipeline;
            cfg.seed = seed;
            auto result = run_stream(to_stream(g, c.churn, seed), cfg);
            row.peak_words = result.resources.peak_words;
            run = std::move(result.run);
            break;
        }
        case RunMode::query: {
            QueryOracle oracle(g);
            QueryRunConfig cfg;
            cfg.palette = c.palette;
            cfg.pipeline = pipeline;
            cfg.seed = seed;
            auto result = run_query_model(oracle, g.num_vertices(), g.max_degree(), cfg, g.num_edges());
            row.queries = result.resources.total;
            run = std::move(result.run);
            break;
        }
        case RunMode::mpc: {
            MpcConfig cfg;
            cfg.machine_count = c.machines;
            cfg.public_randomness = c.public_randomness;
            cfg.palette = c.palette;
            cfg.pipeline = pipeline;
            cfg.check_order_independence = false;
            cfg.seed = seed;
            auto result = run_mpc(g, cfg);
            row.rounds = result.mpc.rounds;
            row.max_machine_words = result.mpc.max_words;
            run = std::move(result.run);
            break;
        }
        }
        const Palette* palette = run.palette.num_vertices() == g.num_vertices() ? &run.palette : nullptr;
        const auto verdict = verify_coloring(g, run.colors, g.max_degree(), palette, c.strict_list);
        row.valid = verdict.ok() && run.report.success;
        row.list_compliant = run.report.list_compliant && run.report.fallback_any_color == 0;
        row.fallback_any = run.report.fallback_any_color;
    } catch (const std::exception& e) {
        row.valid = false;
        row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchCase>& cases, std::size_t trials, std::uint64_t seed,
                                std::size_t workers) {
    std::vector<BenchRow> rows(cases.size() * trials);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            rows[i] = run_bench_case(cases[i / trials], seed + i % trials);
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, rows.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

std::vector<std::string> bench_csv_columns() {
    return {"schema_version", "criterion", "instance", "mode", "seed", "n", "delta", "m", "valid", "list_compliant",
            "fallback_any", "peak_words", "queries", "rounds", "max_machine_words", "wall_ms", "error"};
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    const auto columns = bench_csv_columns();
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
        out << kSchemaVersion << ',' << r.criterion << ',' << csv_field(r.instance) << ',' << r.mode << ',' << r.seed << ','
            << r.n << ',' << r.delta << ',' << r.m << ',' << (r.valid ? 1 : 0) << ',' << (r.list_compliant ? 1 : 0) << ','
            << r.fallback_any << ',' << r.peak_words << ',' << r.queries << ',' << r.rounds << ',' << r.max_machine_words
            << ',' << r.wall_ms << ',' << csv_field(r.error) << '\n';
    }
}

}  // namespace pscolor
