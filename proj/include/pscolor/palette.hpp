#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pscolor/graph.hpp"
#include "pscolor/query_oracle.hpp"
#include "pscolor/sketch.hpp"

namespace pscolor {

enum class PaletteMode { uniform, bernoulli, explicit_lists };

struct PaletteParams {
    PaletteMode mode = PaletteMode::uniform;
    std::size_t max_degree = 0;
    std::size_t list_size = 0;  // K, uniform mode
    double alpha = 0.0;         // bernoulli mode
    double eps = 0.0;
    double probability = 0.0;
    bool all_colors = false;    // theory guard triggered
    std::uint64_t seed = 0;
};

/// Per-vertex color lists in three batches (draw order kept) plus the sorted union.
class Palette {
public:
    using Batches = std::array<std::vector<std::vector<Color>>, 3>;

    Palette() = default;
    /// Throws InvalidArgument if a color falls outside [1, max_degree + 1].
    Palette(PaletteParams params, const Batches& batches);

    std::size_t num_vertices() const { return n_; }
    std::size_t num_colors() const { return params_.max_degree + 1; }
    std::size_t max_degree() const { return params_.max_degree; }
    const PaletteParams& params() const { return params_; }

    /// batch index 0..2 for L1..L3
    std::span<const Color> batch(std::size_t b, Vertex v) const {
        const auto& off = batch_offsets_[b];
        return {batch_colors_[b].data() + off[v], batch_colors_[b].data() + off[v + 1]};
    }
    std::span<const Color> list(Vertex v) const {
        return {list_colors_.data() + list_offsets_[v], list_colors_.data() + list_offsets_[v + 1]};
    }
    bool contains(Vertex v, Color c) const;
    bool batch_contains(std::size_t b, Vertex v, Color c) const;
    bool lists_intersect(Vertex u, Vertex v) const;
    std::size_t total_list_size() const { return list_colors_.size(); }

private:
    std::size_t n_ = 0;
    PaletteParams params_;
    std::array<std::vector<std::size_t>, 3> batch_offsets_;
    std::array<std::vector<Color>, 3> batch_colors_;
    std::vector<std::size_t> list_offsets_{0};
    std::vector<Color> list_colors_;
};

/// Each color enters each batch independently with p = alpha ln n / (3 eps^2 (max_degree+1)),
/// capped at 1; every color is kept when max_degree+1 <= alpha ln n / eps^2.
Palette sample_palettes_bernoulli(std::size_t n, std::size_t max_degree, double alpha, double eps,
                                  std::uint64_t seed);
/// Uniform K-subset per vertex, split floor(K/3), floor(K/3), rest.
Palette sample_palettes_uniform(std::size_t n, std::size_t max_degree, std::size_t list_size, std::uint64_t seed);
/// ceil(c_K ln n), clamped to [1, max_degree+1].
std::size_t practical_list_size(std::size_t n, std::size_t max_degree, double c_k = 8.0);

inline constexpr double kTheoryEps = 1.0 / 5000.0;
inline constexpr double kTheoryAlpha = 5000.0;

/// How a run samples its palette: "uniform", "uniform:K", "bernoulli" or "bernoulli:alpha,eps".
struct PaletteChoice {
    PaletteMode mode = PaletteMode::uniform;
    std::size_t list_size = 0;  // 0 selects practical_list_size
    double list_constant = 8.0;
    double alpha = kTheoryAlpha;
    double eps = kTheoryEps;
};
PaletteChoice parse_palette_choice(const std::string& text);
std::string to_string(const PaletteChoice& choice);
Palette make_palette(const PaletteChoice& choice, std::size_t n, std::size_t max_degree, std::uint64_t seed);

class ColorClasses {
public:
    explicit ColorClasses(const Palette& palette);

    std::size_t num_colors() const { return offsets_.size() - 1; }
    std::span<const Vertex> members(Color c) const {
        return {vertices_.data() + offsets_[c - 1], vertices_.data() + offsets_[c]};
    }
    std::size_t max_class_size() const;
    std::size_t total_size() const { return vertices_.size(); }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> vertices_;
};

enum class ConflictProvenance { offline, queries, stream };

struct ConflictGraph {
    Graph graph;
    ConflictProvenance provenance = ConflictProvenance::offline;
};

ConflictGraph build_conflict_graph_offline(const Graph& g, const Palette& palette);

/// Visits every pair u < v sharing a list color, u ascending then v ascending.
/// Depends only on the palette, so the query plan is fixed before any answer.
void for_each_planned_pair(const Palette& palette, const ColorClasses& classes,
                           const std::function<void(Vertex, Vertex)>& visit);
std::vector<Edge> planned_pair_queries(const Palette& palette, const ColorClasses& classes);

ConflictGraph build_conflict_graph_queries(QueryOracle& oracle, const Palette& palette, const ColorClasses& classes);

/// Default k_per_vertex: ceil(4 K^2) with K the mean list size.
std::size_t default_conflict_sampler_k(const Palette& palette);

/// Per-vertex l0 samplers over v x (union of the classes of L(v)), fed one event at a time.
class StreamConflictBuilder {
public:
    StreamConflictBuilder(const Palette& palette, const ColorClasses& classes, std::size_t max_degree,
                          std::size_t k_per_vertex, SamplerBackend backend, std::uint64_t seed,
                          SpaceAccountant* accountant = nullptr);

    void process(const StreamEvent& event);
    /// Throws RecoveryFailure naming the vertex whose sampler failed or overflowed k.
    ConflictGraph finalize() const;

    std::size_t effective_k() const { return k_; }

private:
    const Palette* palette_;
    std::size_t n_;
    std::size_t k_;
    std::size_t requested_k_;
    std::vector<std::unique_ptr<L0Sampler>> samplers_;
};

ConflictGraph build_conflict_graph_stream(const Palette& palette, const ColorClasses& classes,
                                          const std::vector<StreamEvent>& events, std::size_t max_degree,
                                          std::size_t k_per_vertex, SamplerBackend backend, std::uint64_t seed,
                                          SpaceAccountant* accountant = nullptr);

}  // namespace pscolor
