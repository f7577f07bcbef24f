#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pscolor/graph.hpp"
#include "pscolor/query_oracle.hpp"
#include "pscolor/sketch.hpp"

namespace pscolor {

struct CliqueStats {
    std::size_t size = 0;
    double avg_complement_degree = 0.0;
    std::size_t max_outside_neighbors = 0;
    std::size_t max_inside_non_neighbors = 0;
};

struct HssDecomposition {
    double eps = 0.0;
    std::vector<Vertex> sparse;
    std::vector<std::vector<Vertex>> cliques;  // each sorted, ordered by smallest member
    std::vector<CliqueStats> stats;
};

std::vector<CliqueStats> compute_clique_stats(const Graph& g, const std::vector<std::vector<Vertex>>& cliques);
/// Sorts cliques, orders them, derives the sparse remainder and the stats from `g`.
HssDecomposition make_decomposition(const Graph& g, double eps, std::vector<std::vector<Vertex>> cliques);

/// |N(u) ∩ N(v)| for every edge, aligned with g.edges().
std::vector<std::size_t> common_neighbor_counts(const Graph& g);

std::vector<Edge> exact_friend_edges(const Graph& g, double eps);
std::vector<Vertex> exact_dense_vertices(const Graph& g, double eps, std::span<const Edge> friends);
std::vector<Vertex> exact_dense_vertices(const Graph& g, double eps);
/// Components of H(V_dense_2eps, F_2eps) holding an eps-dense vertex are the
/// cliques. Max degree <= 1 yields the all-sparse decomposition.
HssDecomposition exact_extended_decomposition(const Graph& g, double eps);

struct DecompositionBounds {
    double size_low = 0.0;   // multiples of max degree
    double size_high = 0.0;
    double outside = 0.0;
    double inside = 0.0;
    std::optional<double> sparse_eps;  // sparse v: at most C(D,2) - (eps D)(eps D - 1)/2 edges inside N(v)
    std::optional<std::size_t> max_degree;  // defaults to the graph's

    static DecompositionBounds extended(double eps);
    static DecompositionBounds sampled(double delta);
};

struct DecompositionReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

DecompositionReport verify_decomposition(const Graph& g, const HssDecomposition& d, const DecompositionBounds& bounds);
DecompositionReport verify_decomposition(const Graph& g, const HssDecomposition& d, double eps);

/// Number of edges with both endpoints in N(v).
std::size_t neighborhood_edge_count(const Graph& g, Vertex v);

/// Sampled set S with the neighbors each vertex has in S.
class FriendOracle {
public:
    FriendOracle() = default;
    /// sample_neighbors[i] lists the neighbors of sample[i].
    FriendOracle(std::size_t n, std::size_t max_degree, double delta, double rate, std::vector<Vertex> sample,
                 const std::vector<std::vector<Vertex>>& sample_neighbors);

    /// Yes iff c_uv >= (1 - 1.5 delta) * max_degree * rate.
    bool query(Vertex u, Vertex v) const;
    std::size_t common_in_sample(Vertex u, Vertex v) const;
    /// Same answers as query(), batched through a marker array.
    std::vector<char> query_all(std::span<const Edge> pairs) const;

    double threshold() const { return threshold_; }
    double rate() const { return rate_; }
    double delta() const { return delta_; }
    std::size_t num_vertices() const { return n_; }
    const std::vector<Vertex>& sample() const { return sample_; }
    bool covers_all_vertices() const { return sample_.size() == n_; }
    std::span<const Vertex> neighbors_in_sample(Vertex v) const {
        return {in_sample_.data() + offsets_[v], in_sample_.data() + offsets_[v + 1]};
    }
    /// Edges with an endpoint in S; the whole graph when S = V.
    Graph sample_graph() const;

private:
    std::size_t n_ = 0;
    std::size_t max_degree_ = 0;
    double delta_ = 0.0;
    double rate_ = 0.0;
    double threshold_ = 0.0;
    std::vector<Vertex> sample_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> in_sample_;
};

/// min(1, 10 ln n / (delta^2 max_degree)); used for S and for query-model edge slots.
double friend_sample_rate(std::size_t n, std::size_t max_degree, double delta);
std::vector<Vertex> sample_friend_set(std::size_t n, double rate, std::uint64_t seed);
FriendOracle build_friend_oracle(const Graph& g, std::size_t max_degree, double delta, std::uint64_t seed,
                                 std::optional<double> rate_override = std::nullopt);

/// ceil(100 n ln n / delta^2), the with-replacement edge sample for dense detection.
std::uint64_t stream_dense_sample_count(std::size_t n, double delta);
/// ceil(10 c_cut n ln n / delta^2), the without-replacement edge sample for H_s.
std::uint64_t stream_hs_sample_count(std::size_t n, double delta, double c_cut);
/// min(1, 4 c_cut ln n / max_degree)
double hs_sample_rate(std::size_t n, std::size_t max_degree, double c_cut);

/// Vertices with at least `threshold` incident sampled edges answered Yes
/// (multiset semantics for with-replacement samples).
std::vector<Vertex> dense_from_samples(std::size_t n, const FriendOracle& oracle, std::span<const Edge> samples,
                                       double threshold);

/// Components of H_s = (dense, candidates answered Yes) with at least (1-delta) max_degree vertices.
std::vector<std::vector<Vertex>> cliques_from_samples(std::size_t n, std::size_t max_degree, double delta,
                                                      std::span<const Vertex> dense, const FriendOracle& oracle,
                                                      std::span<const Edge> candidates);

struct SampledDecompositionConfig {
    double eps = 0.1;
    double c_cut = 1.0;
    std::optional<double> friend_rate;
    std::optional<std::uint64_t> dense_samples;  // stream source
    std::optional<double> dense_rate;            // offline and query sources
    std::optional<std::uint64_t> hs_samples;     // stream source
    std::optional<double> hs_rate;               // offline and query sources
    double delta() const { return eps / 10.0; }
};

struct SampledDecomposition {
    HssDecomposition decomposition;
    FriendOracle oracle;
    std::vector<Vertex> dense;
    bool dense_exhaustive = false;
    bool hs_exhaustive = false;
    double dense_threshold = 0.0;
    std::size_t hs_candidates = 0;
    /// Edges the builder learned; the full graph when the budgets are exhaustive.
    Graph knowledge;
};

/// Edge slots are selected by a public hash so that any holder of an edge
/// makes the same choice. Used offline and by the MPC simulator.
bool hash_selects(const Edge& e, double rate, std::uint64_t seed);

/// Which edges the offline sampled decomposition reads: edges touching S and
/// the hash-selected dense and H_s slots. Computable by any holder of an edge.
struct EdgeSelection {
    bool degenerate = false;
    std::vector<char> in_friend_set;
    double dense_rate = 0.0;
    double hs_rate = 0.0;
    std::uint64_t dense_seed = 0;
    std::uint64_t hs_seed = 0;
    bool touches_friend_set(const Edge& e) const { return in_friend_set[e.u] || in_friend_set[e.v]; }
    bool dense_slot(const Edge& e) const { return hash_selects(e, dense_rate, dense_seed); }
    bool hs_slot(const Edge& e) const { return hash_selects(e, hs_rate, hs_seed); }
    bool relevant(const Edge& e) const { return !degenerate && (touches_friend_set(e) || dense_slot(e) || hs_slot(e)); }
};
EdgeSelection offline_edge_selection(std::size_t n, std::size_t max_degree, const SampledDecompositionConfig& config,
                                     std::uint64_t seed);

/// Reads only the edges offline_edge_selection marks relevant.
SampledDecomposition sampled_decomposition_offline(const Graph& g, std::size_t max_degree,
                                                   const SampledDecompositionConfig& config, std::uint64_t seed);

SampledDecomposition sampled_decomposition_queries(QueryOracle& oracle, std::size_t max_degree,
                                                   const SampledDecompositionConfig& config, std::uint64_t seed);

/// All stream-side state of the decomposition, committed before the first event.
class StreamDecompositionSketch {
public:
    StreamDecompositionSketch(std::size_t n, std::size_t max_degree, const SampledDecompositionConfig& config,
                              SamplerBackend backend, std::uint64_t seed, SpaceAccountant* accountant = nullptr);
    ~StreamDecompositionSketch();
    StreamDecompositionSketch(StreamDecompositionSketch&&) noexcept;
    StreamDecompositionSketch& operator=(StreamDecompositionSketch&&) noexcept;

    void process(const StreamEvent& event);
    /// Throws RecoveryFailure naming the failing structure.
    SampledDecomposition finalize() const;

    std::size_t friend_sample_size() const;

private:
    struct State;
    std::unique_ptr<State> state_;
};

}  // namespace pscolor
