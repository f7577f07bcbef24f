#include "pscolor/query_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pscolor {

std::vector<Color> greedy_small_delta(QueryOracle& oracle, std::size_t n) {
    std::vector<Color> colors(n, kNoColor);
    std::vector<Color> taken;
    for (Vertex v = 0; v < n; ++v) {
        taken.clear();
        const std::size_t degree = oracle.degree(v);
        for (std::size_t i = 1; i <= degree; ++i) {
            const Vertex w = *oracle.neighbor(v, i);
            if (colors[w] != kNoColor) taken.push_back(colors[w]);
        }
        std::sort(taken.begin(), taken.end());
        Color c = 1;
        for (Color t : taken) {
            if (t == c) ++c;
            else if (t > c) break;
        }
        colors[v] = c;
    }
    return colors;
}

std::size_t greedy_branch_limit(std::size_t n, double branch_factor) {
    auto limit = static_cast<std::size_t>(std::floor(branch_factor * std::sqrt(static_cast<double>(n))));
    if (branch_factor == 1.0) {
        while ((limit + 1) * (limit + 1) <= n) ++limit;
        while (limit * limit > n) --limit;
    }
    return limit;
}

QueryRunResult run_query_model(QueryOracle& oracle, std::size_t n, std::size_t max_degree, const QueryRunConfig& config,
                               std::optional<std::uint64_t> baseline_m) {
    if (oracle.num_vertices() != n) throw InvalidArgument("oracle covers a different vertex count");
    const auto start = std::chrono::steady_clock::now();
    QueryRunResult out;
    auto& res = out.resources;
    res.baseline_m = baseline_m.value_or(0);
    const QueryCounts before = oracle.counts();

    if (max_degree <= greedy_branch_limit(n, config.branch_factor)) {
        res.branch = QueryBranch::greedy;
        out.run.colors = greedy_small_delta(oracle, n);
        out.run.colored_by.assign(n, ColoredBy::none);
        auto& r = out.run.report;
        r.n = n;
        r.max_degree = max_degree;
        r.list_compliant = true;
        r.success = true;
        for (Color c : out.run.colors) {
            if (c > max_degree + 1) r.success = false;
        }
    } else {
        res.branch = QueryBranch::sparsification;
        out.run.palette = make_palette(config.palette, n, max_degree, config.seed);
        const ColorClasses classes(out.run.palette);
        const auto conflict = build_conflict_graph_queries(oracle, out.run.palette, classes);
        res.conflict_pair_q = oracle.counts().pair - before.pair;
        out.run.conflict = summarize_conflict(conflict.graph, classes);

        const std::uint64_t pairs_before = oracle.counts().pair;
        auto sampled = sampled_decomposition_queries(oracle, max_degree, config.decomposition, config.seed);
        res.decomposition_pair_q = oracle.counts().pair - pairs_before;
        out.run.decomposition = std::move(sampled.decomposition);

        const std::uint64_t neighbors_before = oracle.counts().neighbor;
        auto neighbors = [&oracle](Vertex v) {
            const std::size_t degree = oracle.degree(v);
            std::vector<Vertex> adj;
            adj.reserve(degree);
            for (std::size_t i = 1; i <= degree; ++i) adj.push_back(*oracle.neighbor(v, i));
            return adj;
        };
        auto result = list_color_pipeline(conflict.graph, out.run.decomposition, out.run.palette, config.pipeline, neighbors);
        res.fallback_neighbor_q = oracle.counts().neighbor - neighbors_before;
        out.run.colors = std::move(result.colors);
        out.run.colored_by = std::move(result.colored_by);
        out.run.report = result.report;
    }

    const QueryCounts& after = oracle.counts();
    res.degree_q = after.degree - before.degree;
    res.neighbor_q = after.neighbor - before.neighbor;
    res.pair_q = after.pair - before.pair;
    res.total = res.neighbor_q + res.pair_q + (config.count_degree_queries ? res.degree_q : 0);
    out.run.report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace pscolor
