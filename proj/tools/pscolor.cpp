#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pscolor/harness.hpp"

using nlohmann::json;
using namespace pscolor;

namespace {

constexpr int kExitFailure = 2;
constexpr int kExitError = 1;

struct GenOptions {
    std::string model;
    std::map<std::string, double> params;
    std::vector<std::string> extra;
    std::uint64_t seed = 1;
    std::string output;
};

struct ColorOptions {
    std::string graph;
    std::string stream_file;
    std::string mode = "offline";
    std::string palette = "uniform";
    std::string decomposition = "sampled";
    std::string backend = "ideal";
    bool strict_list = false;
    bool emit_palette = false;
    std::uint64_t seed = 1;
    std::optional<std::size_t> delta;
    double eps = 0.1;
    double churn = 0.0;
    std::size_t machines = 16;
    std::uint64_t memory_cap = 0;
    bool private_randomness = false;
    std::string output;
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Palette palette_from_json(const json& j, std::size_t n) {
    PaletteParams params;
    params.mode = PaletteMode::explicit_lists;
    params.max_degree = j.at("max_degree").get<std::size_t>();
    const auto& lists = j.at("batches");
    if (lists.size() != n) throw ParseError("palette covers " + std::to_string(lists.size()) + " vertices, graph has " + std::to_string(n));
    Palette::Batches batches;
    for (auto& b : batches) b.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t b = 0; b < 3; ++b) batches[b][v] = lists[v].at(b).get<std::vector<Color>>();
    }
    return Palette(params, batches);
}

int cmd_gen(const GenOptions& o) {
    GeneratorSpec spec;
    spec.model = parse_generator_model(o.model);
    spec.params = o.params;
    for (const auto& kv : o.extra) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--param expects key=value, got '" + kv + "'");
        spec.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    spec.seed = o.seed;
    const Graph g = generate(spec);
    std::ostringstream text;
    write_edge_list(text, g);
    write_text(o.output, text.str());
    std::cerr << "generated n=" << g.num_vertices() << " m=" << g.num_edges() << " max_degree=" << g.max_degree() << "\n";
    return 0;
}

int cmd_color(const ColorOptions& o) {
    const RunMode mode = parse_run_mode(o.mode);
    std::optional<StreamFile> stream;
    Graph g;
    if (!o.stream_file.empty()) {
        std::ifstream in(o.stream_file);
        if (!in) throw InvalidArgument("cannot open " + o.stream_file);
        stream = read_stream(in);
        g = replay_stream(stream->n, stream->events);
    } else {
        g = load_edge_list(o.graph);
    }
    const std::size_t delta = o.delta.value_or(stream ? stream->max_degree : g.max_degree());
    PipelineConfig pipeline;
    pipeline.strict_list = o.strict_list;
    SampledDecompositionConfig decomposition;
    decomposition.eps = o.eps;
    const PaletteChoice palette = parse_palette_choice(o.palette);

    json out = {{"schema_version", kSchemaVersion}, {"mode", o.mode},         {"seed", o.seed},
                {"palette", to_string(palette)},    {"n", g.num_vertices()}, {"m", g.num_edges()},
                {"max_degree", delta}};
    ColoringRun run;
    switch (mode) {
    case RunMode::offline: {
        OfflineConfig cfg;
        cfg.palette = palette;
        cfg.decomposition = decomposition;
        cfg.source = parse_decomposition_source(o.decomposition);
        cfg.pipeline = pipeline;
        cfg.max_degree = delta;
        cfg.seed = o.seed;
        run = run_offline(g, cfg);
        break;
    }
    case RunMode::stream: {
        StreamRunConfig cfg;
        cfg.n = g.num_vertices();
        cfg.max_degree = delta;
        cfg.palette = palette;
        cfg.decomposition = decomposition;
        cfg.backend = parse_sampler_backend(o.backend);
        cfg.pipeline = pipeline;
        cfg.seed = o.seed;
        const auto events = stream ? stream->events : to_stream(g, o.churn, o.seed);
        auto result = run_stream(events, cfg);
        out["resources"] = to_json(result.resources);
        run = std::move(result.run);
        break;
    }
    case RunMode::query: {
        QueryOracle oracle(g);
        QueryRunConfig cfg;
        cfg.palette = palette;
        cfg.decomposition = decomposition;
        cfg.pipeline = pipeline;
        cfg.seed = o.seed;
        auto result = run_query_model(oracle, g.num_vertices(), delta, cfg, g.num_edges());
        out["resources"] = to_json(result.resources);
        run = std::move(result.run);
        break;
    }
    case RunMode::mpc: {
        MpcConfig cfg;
        cfg.machine_count = o.machines;
        cfg.memory_cap = o.memory_cap;
        cfg.public_randomness = !o.private_randomness;
        cfg.palette = palette;
        cfg.decomposition = decomposition;
        cfg.pipeline = pipeline;
        cfg.max_degree = delta;
        cfg.seed = o.seed;
        auto result = run_mpc(g, cfg);
        out["resources"] = to_json(result.mpc);
        run = std::move(result.run);
        break;
    }
    }
    const Palette* lists = run.palette.num_vertices() == g.num_vertices() ? &run.palette : nullptr;
    const auto verdict = verify_coloring(g, run.colors, delta, lists, o.strict_list);
    std::map<std::string, std::size_t> by;
    for (auto how : run.colored_by) ++by[to_string(how)];
    out["report"] = to_json(run.report);
    out["colored_by"] = by;
    out["conflict"] = {{"edges", run.conflict.edges},
                       {"max_degree", run.conflict.max_degree},
                       {"max_class_size", run.conflict.max_class_size}};
    out["verification"] = to_json(verdict);
    out["coloring"] = coloring_json(run.colors);
    if (o.emit_palette && lists) out["lists"] = palette_json(run.palette);
    const bool ok = verdict.ok() && run.report.success;
    out["ok"] = ok;
    write_text(o.output, out.dump(2) + "\n");
    if (!ok && !o.output.empty() && o.output != "-") std::cout << out.dump(2) << "\n";
    return ok ? 0 : kExitFailure;
}

int cmd_verify(const std::string& graph_path, const std::string& coloring_path, bool strict_list,
               std::optional<std::size_t> delta) {
    const Graph g = load_edge_list(graph_path);
    const json j = read_json(coloring_path);
    const auto colors = coloring_from_json(j);
    std::optional<Palette> palette;
    if (strict_list) {
        if (!j.is_object() || !j.contains("lists")) throw InvalidArgument("--strict-list needs a coloring file written with --emit-palette");
        palette = palette_from_json(j.at("lists"), g.num_vertices());
    }
    std::optional<std::size_t> declared = delta;
    if (!declared && j.is_object() && j.contains("max_degree")) declared = j.at("max_degree").get<std::size_t>();
    const auto verdict = verify_coloring(g, colors, declared, palette ? &*palette : nullptr, strict_list);
    json out = to_json(verdict);
    out["schema_version"] = kSchemaVersion;
    std::cout << out.dump(2) << "\n";
    return verdict.ok() ? 0 : kExitFailure;
}

int cmd_stream(const std::string& graph_path, double churn, std::uint64_t seed, const std::string& output) {
    const Graph g = load_edge_list(graph_path);
    StreamFile file{g.num_vertices(), g.max_degree(), to_stream(g, churn, seed)};
    std::ostringstream text;
    write_stream(text, file);
    write_text(output, text.str());
    return 0;
}

int cmd_bench(const std::string& preset, std::size_t trials, std::uint64_t seed, std::size_t workers, const std::string& output) {
    const auto rows = run_bench(bench_preset(preset), trials, seed, workers);
    std::ostringstream text;
    write_bench_csv(text, rows);
    write_text(output, text.str());
    for (const auto& r : rows) {
        if (!r.error.empty()) std::cerr << r.instance << " " << r.mode << " seed " << r.seed << ": " << r.error << "\n";
    }
    return 0;
}

int cmd_decomp(const std::string& graph_path, const std::string& source, double eps, std::uint64_t seed,
               std::optional<std::size_t> delta, const std::string& output) {
    const Graph g = load_edge_list(graph_path);
    const std::size_t max_degree = delta.value_or(g.max_degree());
    json out = {{"schema_version", kSchemaVersion}, {"source", source}, {"eps", eps}};
    DecompositionReport report;
    if (parse_decomposition_source(source) == DecompositionSource::exact) {
        const auto d = exact_extended_decomposition(g, eps);
        report = verify_decomposition(g, d, eps);
        out["decomposition"] = to_json(d);
    } else {
        SampledDecompositionConfig cfg;
        cfg.eps = eps;
        const auto sd = sampled_decomposition_offline(g, max_degree, cfg, seed);
        auto bounds = DecompositionBounds::sampled(cfg.delta());
        bounds.max_degree = max_degree;
        report = verify_decomposition(g, sd.decomposition, bounds);
        out["decomposition"] = to_json(sd.decomposition);
        out["dense"] = sd.dense;
        out["friend_sample_size"] = sd.oracle.sample().size();
    }
    out["violations"] = report.violations;
    out["ok"] = report.ok();
    write_text(output, out.dump(2) + "\n");
    return report.ok() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(Delta+1) vertex coloring by palette sparsification: offline, streaming, query and MPC runners"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a graph as an edge list");
    gen_cmd->add_option("--model", gen.model, "gnp_capped | regular_like | clique_collection | coloring_hard | matching_hard | union")
        ->required();
    for (const char* key : {"n", "delta", "p", "d", "size", "count"}) {
        gen_cmd->add_option_function<double>(std::string("--") + key, [&gen, key](double v) { gen.params[key] = v; },
                                             std::string("generator parameter ") + key);
    }
    gen_cmd->add_option_function<double>("--K", [](double) {}, "accepted and ignored; list sizes are chosen by color");
    gen_cmd->add_option("--param", gen.extra, "extra generator parameter key=value");
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("-o,--output", gen.output, "edge-list path (stdout when omitted)");

    ColorOptions color;
    auto* color_cmd = app.add_subcommand("color", "Color a graph and emit the coloring with a JSON report");
    color_cmd->add_option("graph", color.graph, "edge-list file");
    color_cmd->add_option("--stream-file", color.stream_file, "read a stream file instead of an edge list");
    color_cmd->add_option("--mode", color.mode, "offline | stream | query | mpc");
    color_cmd->add_option("--palette", color.palette, "uniform[:K] | bernoulli[:alpha,eps]");
    color_cmd->add_option("--decomposition", color.decomposition, "sampled | exact (offline mode)");
    color_cmd->add_option("--backend", color.backend, "ideal | sketch (stream mode)");
    color_cmd->add_flag("--strict-list", color.strict_list, "never leave the sampled lists");
    color_cmd->add_flag("--emit-palette", color.emit_palette, "include the sampled lists in the output");
    color_cmd->add_option("--seed", color.seed);
    color_cmd->add_option("--delta", color.delta, "declared maximum degree");
    color_cmd->add_option("--eps", color.eps, "decomposition epsilon");
    color_cmd->add_option("--churn", color.churn, "stream mode: fraction of extra insert/delete pairs");
    color_cmd->add_option("--machines", color.machines, "mpc mode: edge machines");
    color_cmd->add_option("--memory-cap", color.memory_cap, "mpc mode: words per machine (default 8 n ln^2 n)");
    color_cmd->add_flag("--private", color.private_randomness, "mpc mode: private randomness");
    color_cmd->add_option("-o,--output", color.output, "JSON path (stdout when omitted)");

    std::string verify_graph, verify_coloring_path;
    bool verify_strict = false;
    std::optional<std::size_t> verify_delta;
    auto* verify_cmd = app.add_subcommand("verify", "Check a coloring against a graph");
    verify_cmd->add_option("graph", verify_graph)->required();
    verify_cmd->add_option("coloring", verify_coloring_path, "JSON from color, or a bare array")->required();
    verify_cmd->add_flag("--strict-list", verify_strict);
    verify_cmd->add_option("--delta", verify_delta);

    std::string stream_graph, stream_output;
    double stream_churn = 0.0;
    std::uint64_t stream_seed = 1;
    auto* stream_cmd = app.add_subcommand("stream", "Turn a graph into an insert/delete stream file");
    stream_cmd->add_option("graph", stream_graph)->required();
    stream_cmd->add_option("--churn", stream_churn);
    stream_cmd->add_option("--seed", stream_seed);
    stream_cmd->add_option("-o,--output", stream_output);

    std::string bench_preset_name = "smoke", bench_output;
    std::size_t bench_trials = 3, bench_workers = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t bench_seed = 1;
    auto* bench_cmd = app.add_subcommand("bench", "Run a preset sweep and write CSV");
    bench_cmd->add_option("--preset", bench_preset_name, "smoke | acceptance");
    bench_cmd->add_option("--trials", bench_trials);
    bench_cmd->add_option("--seed", bench_seed);
    bench_cmd->add_option("--workers", bench_workers);
    bench_cmd->add_option("-o,--output", bench_output);

    std::string decomp_graph, decomp_source = "exact", decomp_output;
    double decomp_eps = 0.1;
    std::uint64_t decomp_seed = 1;
    std::optional<std::size_t> decomp_delta;
    auto* decomp_cmd = app.add_subcommand("decomp", "Compute and verify a decomposition");
    decomp_cmd->add_option("graph", decomp_graph)->required();
    decomp_cmd->add_option("--source", decomp_source, "exact | sampled");
    decomp_cmd->add_option("--eps", decomp_eps);
    decomp_cmd->add_option("--seed", decomp_seed);
    decomp_cmd->add_option("--delta", decomp_delta);
    decomp_cmd->add_option("-o,--output", decomp_output);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen_cmd) return cmd_gen(gen);
        if (*color_cmd) {
            if (color.graph.empty() == color.stream_file.empty()) throw InvalidArgument("give exactly one of graph or --stream-file");
            return cmd_color(color);
        }
        if (*verify_cmd) return cmd_verify(verify_graph, verify_coloring_path, verify_strict, verify_delta);
        if (*stream_cmd) return cmd_stream(stream_graph, stream_churn, stream_seed, stream_output);
        if (*bench_cmd) return cmd_bench(bench_preset_name, bench_trials, bench_seed, bench_workers, bench_output);
        if (*decomp_cmd) return cmd_decomp(decomp_graph, decomp_source, decomp_eps, decomp_seed, decomp_delta, decomp_output);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        json failure = {{"schema_version", kSchemaVersion}, {"ok", false}, {"error", e.what()}};
        std::cout << failure.dump(2) << "\n";
        return kExitFailure;
    }
    return 0;
}
