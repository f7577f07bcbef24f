#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pscolor/coloring.hpp"
#include "pscolor/decomposition.hpp"
#include "pscolor/palette.hpp"

namespace pscolor {

enum class DecompositionSource { sampled, exact };
DecompositionSource parse_decomposition_source(const std::string& name);
std::string to_string(DecompositionSource source);

struct OfflineConfig {
    PaletteChoice palette;
    SampledDecompositionConfig decomposition;
    DecompositionSource source = DecompositionSource::sampled;
    PipelineConfig pipeline;
    std::optional<std::size_t> max_degree;  // defaults to the graph's
    std::uint64_t seed = 0;
};

struct ConflictSummary {
    std::size_t edges = 0;
    std::size_t max_degree = 0;
    std::size_t max_class_size = 0;
};

struct ColoringRun {
    std::vector<Color> colors;
    std::vector<ColoredBy> colored_by;
    RunReport report;
    Palette palette;
    HssDecomposition decomposition;
    ConflictSummary conflict;
};

ConflictSummary summarize_conflict(const Graph& conflict, const ColorClasses& classes);

/// Palette, conflict graph, decomposition of the input graph, then the engine on the conflict graph.
ColoringRun run_offline(const Graph& g, const OfflineConfig& config);

}  // namespace pscolor
