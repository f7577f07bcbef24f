#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pscolor/decomposition.hpp"
#include "pscolor/graph.hpp"
#include "pscolor/matching.hpp"
#include "pscolor/palette.hpp"

namespace pscolor {

/// Vertex -> color-or-null over a fixed graph, with per-vertex counts of
/// neighbors holding each color so availability checks are O(1).
class PartialColoring {
public:
    PartialColoring(const Graph& g, std::size_t num_colors);

    const Graph& graph() const { return *graph_; }
    std::size_t num_vertices() const { return colors_.size(); }
    std::size_t num_colors() const { return num_colors_; }
    Color color(Vertex v) const { return colors_[v]; }
    bool is_colored(Vertex v) const { return colors_[v] != kNoColor; }
    std::size_t colored_count() const { return colored_; }
    std::span<const Color> colors() const { return colors_; }

    /// True when no neighbor currently holds c.
    bool available(Vertex v, Color c) const { return blocked_[index(v, c)] == 0; }
    std::size_t blocking_count(Vertex v, Color c) const { return blocked_[index(v, c)]; }

    /// Throws ProperViolation if v is colored or a neighbor holds c.
    void assign(Vertex v, Color c);
    void unassign(Vertex v);

private:
    std::size_t index(Vertex v, Color c) const { return static_cast<std::size_t>(v) * num_colors_ + (c - 1); }

    const Graph* graph_;
    std::size_t num_colors_;
    std::vector<Color> colors_;
    std::vector<std::uint32_t> blocked_;
    std::size_t colored_ = 0;
};

/// Monochromatic edges of the coloring's graph.
std::vector<Edge> improper_edges(const PartialColoring& coloring);

struct OneShotResult {
    std::size_t proposed = 0;
    std::size_t colored = 0;
};

/// proposals[v] is v's one-shot color (kNoColor for inert vertices). A sparse
/// vertex keeps its proposal iff no neighbor proposed the same color.
OneShotResult one_shot_color(PartialColoring& coloring, std::span<const Vertex> sparse, std::span<const Color> proposals);
/// First color of each vertex's L1 batch; kNoColor off the sparse set.
std::vector<Color> first_colors(const Palette& palette, std::span<const Vertex> sparse);

struct GreedyRoundsResult {
    std::size_t rounds = 0;
    std::size_t colored = 0;
    std::vector<Vertex> residual;
};

/// Round i proposes L1(v)[i mod |L1(v)|]; v takes it if available and no
/// uncolored sparse neighbor proposes the same color.
GreedyRoundsResult greedy_color_rounds(PartialColoring& coloring, const Palette& palette, std::span<const Vertex> sparse,
                                       std::size_t rounds);

struct ColorfulTriple {
    Vertex u = 0;
    Vertex v = 0;
    Color color = kNoColor;
    bool operator==(const ColorfulTriple&) const = default;
};

struct ColorfulMatching {
    std::vector<ColorfulTriple> triples;
    std::size_t target = 0;
    bool short_of_target = false;
    bool search_exhaustive = true;  // false when the search budget ran out
};

inline constexpr std::size_t kColorfulSearchBudget = 20000;

/// ceil(4 * avg complement degree)
std::size_t colorful_target(double avg_complement_degree);
/// Triples (u, v, c): u, v non-adjacent uncolored clique vertices, c in both L2
/// batches and available to both, colors and vertices distinct. Depth-first over
/// colors ascending, pairs lexicographic, so the first branch is the greedy
/// matching; backtracks until `target` triples or the budget runs out.
ColorfulMatching find_colorful_matching(const PartialColoring& coloring, const Palette& palette,
                                        std::span<const Vertex> clique, std::size_t target,
                                        std::size_t search_budget = kColorfulSearchBudget);
/// Throws ProperViolation on a stale or invalid triple.
void apply_colorful_matching(PartialColoring& coloring, const ColorfulMatching& matching);

struct PaletteGraph {
    std::vector<Vertex> left;  // uncolored clique vertices, ascending
    BipartiteGraph bipartite;  // right id r is color r + 1
};

PaletteGraph build_palette_graph(const PartialColoring& coloring, const Palette& palette, std::span<const Vertex> clique);

struct CompletionResult {
    std::size_t uncolored = 0;
    std::size_t matched = 0;
    std::vector<Vertex> residual;
};

CompletionResult complete_clique_coloring(PartialColoring& coloring, const Palette& palette, std::span<const Vertex> clique);

/// Full neighborhood of v in the input graph, for colors outside the lists.
using NeighborhoodFn = std::function<std::vector<Vertex>(Vertex)>;

struct FallbackOptions {
    bool strict_list = false;
    NeighborhoodFn full_neighbors;
};

struct FallbackResult {
    std::size_t list_greedy = 0;
    std::size_t local_search = 0;
    std::size_t any_color = 0;
    std::vector<Vertex> failed;
    std::vector<Vertex> recolored;  // neighbors moved by the local search
    bool list_compliant() const { return any_color == 0; }
    bool success() const { return failed.empty(); }
};

/// (1) list greedy by decreasing degree, (2) depth-1 recoloring of a single
/// blocking neighbor, (3) unless strict, any free color in [max_degree+1].
FallbackResult fallback_color(PartialColoring& coloring, const Palette& palette, std::span<const Vertex> residuals,
                              const FallbackOptions& options);

struct PipelineConfig {
    double round_constant = 4.0;
    bool strict_list = false;
    bool enable_fallback = true;
    bool check_each_phase = false;
};

enum class ColoredBy : std::uint8_t { none, one_shot, greedy_rounds, colorful_matching, palette_matching, fallback_list, fallback_local, fallback_any };

struct RunReport {
    std::size_t n = 0;
    std::size_t max_degree = 0;
    bool degenerate = false;
    std::size_t sparse_vertices = 0;
    std::size_t one_shot_colored = 0;
    std::size_t greedy_rounds = 0;
    std::size_t greedy_colored = 0;
    std::size_t phase1_residual = 0;
    std::size_t cliques = 0;
    std::size_t colorful_pairs = 0;
    std::size_t colorful_target_total = 0;
    std::size_t short_cliques = 0;
    std::size_t phase3_uncolored = 0;
    std::size_t phase3_matched = 0;
    std::size_t phase3_residual = 0;
    std::size_t cliques_saturated = 0;
    std::size_t fallback_list_greedy = 0;
    std::size_t fallback_local_search = 0;
    std::size_t fallback_any_color = 0;
    std::size_t fallback_failed = 0;
    bool list_compliant = true;
    bool success = false;
    double wall_ms = 0.0;
};

struct PipelineResult {
    std::vector<Color> colors;
    std::vector<ColoredBy> colored_by;
    RunReport report;
};

PipelineResult list_color_pipeline(const Graph& g, const HssDecomposition& decomposition, const Palette& palette,
                                   const PipelineConfig& config, const NeighborhoodFn& full_neighbors = {});

/// Number of greedy rounds: min(max |L1| - 1, ceil(c_R ln n)).
std::size_t greedy_round_count(const Palette& palette, double round_constant);

}  // namespace pscolor
