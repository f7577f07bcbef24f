#include "pscolor/offline_runner.hpp"

namespace pscolor {

DecompositionSource parse_decomposition_source(const std::string& name) {
    if (name == "sampled") return DecompositionSource::sampled;
    if (name == "exact") return DecompositionSource::exact;
    throw InvalidArgument("unknown decomposition source '" + name + "'");
}

std::string to_string(DecompositionSource source) {
    return source == DecompositionSource::exact ? "exact" : "sampled";
}

ConflictSummary summarize_conflict(const Graph& conflict, const ColorClasses& classes) {
    return {conflict.num_edges(), conflict.max_degree(), classes.max_class_size()};
}

ColoringRun run_offline(const Graph& g, const OfflineConfig& config) {
    const std::size_t max_degree = config.max_degree.value_or(g.max_degree());
    if (g.max_degree() > max_degree) {
        throw DegreeBoundExceeded("graph degree " + std::to_string(g.max_degree()) + " exceeds declared " +
                                  std::to_string(max_degree));
    }
    ColoringRun run;
    run.palette = make_palette(config.palette, g.num_vertices(), max_degree, config.seed);
    const ColorClasses classes(run.palette);
    const auto conflict = build_conflict_graph_offline(g, run.palette);
    run.conflict = summarize_conflict(conflict.graph, classes);

    if (config.source == DecompositionSource::exact) {
        run.decomposition = exact_extended_decomposition(g, config.decomposition.eps);
    } else {
        run.decomposition = sampled_decomposition_offline(g, max_degree, config.decomposition, config.seed).decomposition;
    }
    auto neighbors = [&g](Vertex v) {
        auto span = g.neighbors(v);
        return std::vector<Vertex>(span.begin(), span.end());
    };
    auto result = list_color_pipeline(conflict.graph, run.decomposition, run.palette, config.pipeline, neighbors);
    run.colors = std::move(result.colors);
    run.colored_by = std::move(result.colored_by);
    run.report = result.report;
    return run;
}

}  // namespace pscolor
