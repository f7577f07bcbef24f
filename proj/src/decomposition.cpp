#include "pscolor/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "pair_sampling.hpp"
#include "pscolor/random.hpp"

namespace pscolor {

namespace {

constexpr double kSlack = 1e-9;

bool at_least(double value, double threshold) { return value >= threshold - kSlack; }

double log_n(std::size_t n) { return n > 1 ? std::log(static_cast<double>(n)) : 0.0; }

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

/// Groups members (given by flag) into components of the edge set.
std::vector<std::vector<Vertex>> components(std::size_t n, const std::vector<char>& member, std::span<const Edge> edges) {
    DisjointSets sets(n);
    for (const auto& e : edges) {
        if (member[e.u] && member[e.v]) sets.unite(e.u, e.v);
    }
    std::vector<std::vector<Vertex>> by_root(n);
    for (Vertex v = 0; v < n; ++v) {
        if (member[v]) by_root[sets.find(v)].push_back(v);
    }
    std::vector<std::vector<Vertex>> out;
    for (auto& c : by_root) {
        if (!c.empty()) out.push_back(std::move(c));
    }
    return out;
}

std::uint64_t max_live_edges(std::size_t n, std::size_t max_degree) {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n) * max_degree / 2);
}

}  // namespace

std::vector<CliqueStats> compute_clique_stats(const Graph& g, const std::vector<std::vector<Vertex>>& cliques) {
    std::vector<CliqueStats> stats;
    std::vector<std::uint32_t> owner(g.num_vertices(), 0);
    for (std::size_t i = 0; i < cliques.size(); ++i) {
        const auto& clique = cliques[i];
        for (Vertex v : clique) owner[v] = static_cast<std::uint32_t>(i + 1);
        CliqueStats s;
        s.size = clique.size();
        double non_neighbor_sum = 0.0;
        for (Vertex v : clique) {
            std::size_t inside = 0;
            for (Vertex w : g.neighbors(v)) inside += owner[w] == i + 1 ? 1 : 0;
            std::size_t outside = g.degree(v) - inside;
            std::size_t missing = clique.size() - 1 - inside;
            s.max_outside_neighbors = std::max(s.max_outside_neighbors, outside);
            s.max_inside_non_neighbors = std::max(s.max_inside_non_neighbors, missing);
            non_neighbor_sum += static_cast<double>(missing);
        }
        s.avg_complement_degree = clique.empty() ? 0.0 : non_neighbor_sum / static_cast<double>(clique.size());
        stats.push_back(s);
    }
    return stats;
}

HssDecomposition make_decomposition(const Graph& g, double eps, std::vector<std::vector<Vertex>> cliques) {
    HssDecomposition d;
    d.eps = eps;
    for (auto& c : cliques) std::sort(c.begin(), c.end());
    cliques.erase(std::remove_if(cliques.begin(), cliques.end(), [](const auto& c) { return c.empty(); }), cliques.end());
    std::sort(cliques.begin(), cliques.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<char> in_clique(g.num_vertices(), 0);
    for (const auto& c : cliques) {
        for (Vertex v : c) in_clique[v] = 1;
    }
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (!in_clique[v]) d.sparse.push_back(v);
    }
    d.stats = compute_clique_stats(g, cliques);
    d.cliques = std::move(cliques);
    return d;
}

std::vector<std::size_t> common_neighbor_counts(const Graph& g) {
    std::vector<std::size_t> counts;
    counts.reserve(g.num_edges());
    std::vector<std::uint32_t> stamp(g.num_vertices(), 0);
    std::size_t cursor = 0;
    auto edges = g.edges();
    for (Vertex u = 0; u < g.num_vertices() && cursor < edges.size(); ++u) {
        if (edges[cursor].u != u) continue;
        for (Vertex w : g.neighbors(u)) stamp[w] = u + 1;
        while (cursor < edges.size() && edges[cursor].u == u) {
            std::size_t common = 0;
            for (Vertex w : g.neighbors(edges[cursor].v)) common += stamp[w] == u + 1 ? 1 : 0;
            counts.push_back(common);
            ++cursor;
        }
    }
    return counts;
}

namespace {

std::vector<char> friend_flags(const Graph& g, const std::vector<std::size_t>& common, double eps) {
    const double threshold = (1.0 - eps) * static_cast<double>(g.max_degree());
    std::vector<char> flags(common.size());
    for (std::size_t i = 0; i < common.size(); ++i) flags[i] = at_least(static_cast<double>(common[i]), threshold);
    return flags;
}

std::vector<char> dense_flags(const Graph& g, std::span<const Edge> friends, double eps) {
    std::vector<std::size_t> friend_degree(g.num_vertices(), 0);
    for (const auto& e : friends) {
        ++friend_degree[e.u];
        ++friend_degree[e.v];
    }
    const double threshold = (1.0 - eps) * static_cast<double>(g.max_degree());
    std::vector<char> flags(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v) flags[v] = at_least(static_cast<double>(friend_degree[v]), threshold);
    return flags;
}

void check_eps(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in [0, 1)");
}

}  // namespace

std::vector<Edge> exact_friend_edges(const Graph& g, double eps) {
    check_eps(eps);
    auto flags = friend_flags(g, common_neighbor_counts(g), eps);
    std::vector<Edge> out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i]) out.push_back(g.edges()[i]);
    }
    return out;
}

std::vector<Vertex> exact_dense_vertices(const Graph& g, double eps, std::span<const Edge> friends) {
    check_eps(eps);
    auto flags = dense_flags(g, friends, eps);
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (flags[v]) out.push_back(v);
    }
    return out;
}

std::vector<Vertex> exact_dense_vertices(const Graph& g, double eps) {
    auto friends = exact_friend_edges(g, eps);
    return exact_dense_vertices(g, eps, friends);
}

HssDecomposition exact_extended_decomposition(const Graph& g, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
    if (g.max_degree() <= 1) return make_decomposition(g, eps, {});

    const auto common = common_neighbor_counts(g);
    auto collect = [&](const std::vector<char>& flags) {
        std::vector<Edge> out;
        for (std::size_t i = 0; i < flags.size(); ++i) {
            if (flags[i]) out.push_back(g.edges()[i]);
        }
        return out;
    };
    const auto friends_wide = collect(friend_flags(g, common, 2.0 * eps));
    const auto friends_tight = collect(friend_flags(g, common, eps));
    const auto dense_wide = dense_flags(g, friends_wide, 2.0 * eps);
    const auto dense_tight = dense_flags(g, friends_tight, eps);

    std::vector<std::vector<Vertex>> cliques;
    for (auto& comp : components(g.num_vertices(), dense_wide, friends_wide)) {
        bool anchored = std::any_of(comp.begin(), comp.end(), [&](Vertex v) { return dense_tight[v] != 0; });
        if (anchored) cliques.push_back(std::move(comp));
    }
    auto d = make_decomposition(g, eps, std::move(cliques));
    auto bounds = DecompositionBounds::extended(eps);
    bounds.sparse_eps.reset();
    auto report = verify_decomposition(g, d, bounds);
    if (!report.ok()) throw std::logic_error("extended decomposition property violated: " + report.violations.front());
    return d;
}

DecompositionBounds DecompositionBounds::extended(double eps) {
    DecompositionBounds b;
    b.size_low = 1.0 - eps;
    b.size_high = 1.0 + 6.0 * eps;
    b.outside = 7.0 * eps;
    b.inside = 6.0 * eps;
    b.sparse_eps = eps;
    return b;
}

DecompositionBounds DecompositionBounds::sampled(double delta) {
    DecompositionBounds b = extended(delta);
    b.sparse_eps.reset();
    return b;
}

std::size_t neighborhood_edge_count(const Graph& g, Vertex v) {
    std::vector<char> mark(g.num_vertices(), 0);
    for (Vertex w : g.neighbors(v)) mark[w] = 1;
    std::size_t twice = 0;
    for (Vertex w : g.neighbors(v)) {
        for (Vertex x : g.neighbors(w)) twice += mark[x];
    }
    return twice / 2;
}

DecompositionReport verify_decomposition(const Graph& g, const HssDecomposition& d, const DecompositionBounds& b) {
    DecompositionReport report;
    const std::size_t n = g.num_vertices();
    const double delta = static_cast<double>(b.max_degree.value_or(g.max_degree()));
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    std::vector<int> seen(n, 0);
    auto visit = [&](Vertex v) {
        if (v >= n) {
            fail("vertex " + std::to_string(v) + " out of range");
            return;
        }
        ++seen[v];
    };
    for (Vertex v : d.sparse) visit(v);
    for (const auto& c : d.cliques) {
        for (Vertex v : c) visit(v);
    }
    for (Vertex v = 0; v < n; ++v) {
        if (seen[v] != 1) fail("vertex " + std::to_string(v) + " appears " + std::to_string(seen[v]) + " times in the partition");
    }

    auto stats = compute_clique_stats(g, d.cliques);
    for (std::size_t i = 0; i < d.cliques.size(); ++i) {
        const auto& s = stats[i];
        std::ostringstream where;
        where << "clique " << i << " (size " << s.size << ")";
        if (!at_least(static_cast<double>(s.size), b.size_low * delta)) fail(where.str() + " below size bound " + std::to_string(b.size_low * delta));
        if (!at_least(b.size_high * delta, static_cast<double>(s.size))) fail(where.str() + " above size bound " + std::to_string(b.size_high * delta));
        if (!at_least(b.outside * delta, static_cast<double>(s.max_outside_neighbors))) {
            fail(where.str() + " has a vertex with " + std::to_string(s.max_outside_neighbors) + " outside neighbors");
        }
        if (!at_least(b.inside * delta, static_cast<double>(s.max_inside_non_neighbors))) {
            fail(where.str() + " has a vertex with " + std::to_string(s.max_inside_non_neighbors) + " inside non-neighbors");
        }
    }

    if (b.sparse_eps) {
        const double eps = *b.sparse_eps;
        // C(delta, 2) - (eps delta)(eps delta - 1) / 2
        const double missing = eps * delta;
        const double limit = delta * (delta - 1.0) / 2.0 - 0.5 * missing * std::max(0.0, missing - 1.0);
        std::vector<char> mark(n, 0);
        for (Vertex v : d.sparse) {
            if (v >= n) continue;
            for (Vertex w : g.neighbors(v)) mark[w] = 1;
            std::size_t twice = 0;
            for (Vertex w : g.neighbors(v)) {
                for (Vertex x : g.neighbors(w)) twice += mark[x];
            }
            for (Vertex w : g.neighbors(v)) mark[w] = 0;
            if (!at_least(limit, static_cast<double>(twice / 2))) {
                fail("sparse vertex " + std::to_string(v) + " has " + std::to_string(twice / 2) +
                     " edges in its neighborhood, above " + std::to_string(limit));
            }
        }
    }
    return report;
}

DecompositionReport verify_decomposition(const Graph& g, const HssDecomposition& d, double eps) {
    return verify_decomposition(g, d, DecompositionBounds::extended(eps));
}

FriendOracle::FriendOracle(std::size_t n, std::size_t max_degree, double delta, double rate, std::vector<Vertex> sample,
                           const std::vector<std::vector<Vertex>>& sample_neighbors)
    : n_(n),
      max_degree_(max_degree),
      delta_(delta),
      rate_(rate),
      threshold_((1.0 - 1.5 * delta) * static_cast<double>(max_degree) * rate),
      sample_(std::move(sample)),
      offsets_(n + 1, 0) {
    if (sample_neighbors.size() != sample_.size()) throw InvalidArgument("friend oracle: neighborhoods must match the sample");
    for (const auto& nb : sample_neighbors) {
        for (Vertex w : nb) {
            if (w >= n) throw InvalidArgument("friend oracle: neighbor out of range");
            ++offsets_[w + 1];
        }
    }
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    in_sample_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < sample_.size(); ++i) {
        for (Vertex w : sample_neighbors[i]) in_sample_[cursor[w]++] = sample_[i];
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(in_sample_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  in_sample_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
}

std::size_t FriendOracle::common_in_sample(Vertex u, Vertex v) const {
    auto a = neighbors_in_sample(u);
    auto b = neighbors_in_sample(v);
    std::size_t i = 0, j = 0, common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return common;
}

bool FriendOracle::query(Vertex u, Vertex v) const {
    return at_least(static_cast<double>(common_in_sample(u, v)), threshold_);
}

std::vector<char> FriendOracle::query_all(std::span<const Edge> pairs) const {
    std::vector<char> answers(pairs.size(), 0);
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pairs[a].u < pairs[b].u; });
    std::vector<std::uint32_t> stamp(n_, 0);
    std::uint32_t current = 0;
    Vertex marked = 0;
    bool any = false;
    for (std::size_t idx : order) {
        const auto& e = pairs[idx];
        if (!any || e.u != marked) {
            ++current;
            for (Vertex s : neighbors_in_sample(e.u)) stamp[s] = current;
            marked = e.u;
            any = true;
        }
        std::size_t common = 0;
        for (Vertex s : neighbors_in_sample(e.v)) common += stamp[s] == current ? 1 : 0;
        answers[idx] = at_least(static_cast<double>(common), threshold_);
    }
    return answers;
}

Graph FriendOracle::sample_graph() const {
    std::vector<Edge> edges;
    for (Vertex w = 0; w < n_; ++w) {
        for (Vertex s : neighbors_in_sample(w)) edges.push_back(make_edge(s, w));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph(n_, std::move(edges));
}

double friend_sample_rate(std::size_t n, std::size_t max_degree, double delta) {
    if (max_degree == 0) return 1.0;
    return std::min(1.0, 10.0 * log_n(n) / (delta * delta * static_cast<double>(max_degree)));
}

std::vector<Vertex> sample_friend_set(std::size_t n, double rate, std::uint64_t seed) {
    std::vector<Vertex> out;
    Rng rng(derive_seed(seed, "friend-set"));
    for (Vertex v = 0; v < n; ++v) {
        if (rng.bernoulli(rate)) out.push_back(v);
    }
    return out;
}

FriendOracle build_friend_oracle(const Graph& g, std::size_t max_degree, double delta, std::uint64_t seed,
                                 std::optional<double> rate_override) {
    if (max_degree < 1) throw InvalidArgument("friend oracle needs max degree >= 1");
    const double rate = rate_override.value_or(friend_sample_rate(g.num_vertices(), max_degree, delta));
    auto sample = sample_friend_set(g.num_vertices(), rate, seed);
    std::vector<std::vector<Vertex>> neighborhoods;
    neighborhoods.reserve(sample.size());
    for (Vertex s : sample) neighborhoods.emplace_back(g.neighbors(s).begin(), g.neighbors(s).end());
    return FriendOracle(g.num_vertices(), max_degree, delta, rate, std::move(sample), neighborhoods);
}

std::uint64_t stream_dense_sample_count(std::size_t n, double delta) {
    return static_cast<std::uint64_t>(std::ceil(100.0 * static_cast<double>(n) * log_n(n) / (delta * delta)));
}

std::uint64_t stream_hs_sample_count(std::size_t n, double delta, double c_cut) {
    return static_cast<std::uint64_t>(std::ceil(10.0 * c_cut * static_cast<double>(n) * log_n(n) / (delta * delta)));
}

double hs_sample_rate(std::size_t n, std::size_t max_degree, double c_cut) {
    if (max_degree == 0) return 1.0;
    return std::min(1.0, 4.0 * c_cut * log_n(n) / static_cast<double>(max_degree));
}

std::vector<Vertex> dense_from_samples(std::size_t n, const FriendOracle& oracle, std::span<const Edge> samples,
                                       double threshold) {
    auto answers = oracle.query_all(samples);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (answers[i]) {
            ++count[samples[i].u];
            ++count[samples[i].v];
        }
    }
    std::vector<Vertex> dense;
    for (Vertex v = 0; v < n; ++v) {
        if (at_least(static_cast<double>(count[v]), threshold)) dense.push_back(v);
    }
    return dense;
}

std::vector<std::vector<Vertex>> cliques_from_samples(std::size_t n, std::size_t max_degree, double delta,
                                                      std::span<const Vertex> dense, const FriendOracle& oracle,
                                                      std::span<const Edge> candidates) {
    std::vector<char> member(n, 0);
    for (Vertex v : dense) member[v] = 1;
    std::vector<Edge> inside;
    for (const auto& e : candidates) {
        if (member[e.u] && member[e.v]) inside.push_back(e);
    }
    auto answers = oracle.query_all(inside);
    std::vector<Edge> kept;
    for (std::size_t i = 0; i < inside.size(); ++i) {
        if (answers[i]) kept.push_back(inside[i]);
    }
    const double min_size = (1.0 - delta) * static_cast<double>(max_degree);
    std::vector<std::vector<Vertex>> out;
    for (auto& comp : components(n, member, kept)) {
        if (at_least(static_cast<double>(comp.size()), min_size)) out.push_back(std::move(comp));
    }
    return out;
}

bool hash_selects(const Edge& e, double rate, std::uint64_t seed) {
    if (rate >= 1.0) return true;
    if (rate <= 0.0) return false;
    const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
    return static_cast<double>(hash64(key, seed) >> 11) * 0x1.0p-53 < rate;
}

namespace {

SampledDecomposition all_sparse(std::size_t n, double eps) {
    SampledDecomposition out;
    out.decomposition.eps = eps;
    out.decomposition.sparse.resize(n);
    std::iota(out.decomposition.sparse.begin(), out.decomposition.sparse.end(), Vertex{0});
    out.knowledge = Graph(n);
    return out;
}

Graph merge_knowledge(std::size_t n, const Graph& base, std::vector<Edge> extra) {
    extra.insert(extra.end(), base.edges().begin(), base.edges().end());
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    return Graph(n, std::move(extra));
}

}  // namespace

EdgeSelection offline_edge_selection(std::size_t n, std::size_t max_degree, const SampledDecompositionConfig& config,
                                     std::uint64_t seed) {
    EdgeSelection sel;
    if (max_degree <= 1) {
        sel.degenerate = true;
        sel.in_friend_set.assign(n, 0);
        return sel;
    }
    const double delta = config.delta();
    const double rate = config.friend_rate.value_or(friend_sample_rate(n, max_degree, delta));
    sel.in_friend_set.assign(n, 0);
    for (Vertex s : sample_friend_set(n, rate, derive_seed(seed, "friend"))) sel.in_friend_set[s] = 1;
    sel.dense_rate = config.dense_rate.value_or(friend_sample_rate(n, max_degree, delta));
    sel.hs_rate = config.hs_rate.value_or(hs_sample_rate(n, max_degree, config.c_cut));
    sel.dense_seed = derive_seed(seed, "dense-slots");
    sel.hs_seed = derive_seed(seed, "hs-slots");
    return sel;
}

SampledDecomposition sampled_decomposition_offline(const Graph& g, std::size_t max_degree,
                                                   const SampledDecompositionConfig& config, std::uint64_t seed) {
    const std::size_t n = g.num_vertices();
    if (max_degree <= 1) return all_sparse(n, config.eps);
    const double delta = config.delta();

    SampledDecomposition out;
    out.oracle = build_friend_oracle(g, max_degree, delta, derive_seed(seed, "friend"), config.friend_rate);
    const EdgeSelection sel = offline_edge_selection(n, max_degree, config, seed);
    std::vector<Edge> dense_samples, hs_samples;
    for (const auto& e : g.edges()) {
        if (sel.dense_slot(e)) dense_samples.push_back(e);
        if (sel.hs_slot(e)) hs_samples.push_back(e);
    }
    out.dense_exhaustive = sel.dense_rate >= 1.0;
    out.hs_exhaustive = sel.hs_rate >= 1.0;
    out.dense_threshold = (1.0 - 1.5 * delta) * static_cast<double>(max_degree) * std::min(1.0, sel.dense_rate);
    out.dense = dense_from_samples(n, out.oracle, dense_samples, out.dense_threshold);
    out.hs_candidates = hs_samples.size();
    auto cliques = cliques_from_samples(n, max_degree, delta, out.dense, out.oracle, hs_samples);

    std::vector<Edge> learned = dense_samples;
    learned.insert(learned.end(), hs_samples.begin(), hs_samples.end());
    out.knowledge = merge_knowledge(n, out.oracle.sample_graph(), std::move(learned));
    out.decomposition = make_decomposition(out.knowledge, config.eps, std::move(cliques));
    return out;
}

SampledDecomposition sampled_decomposition_queries(QueryOracle& oracle, std::size_t max_degree,
                                                   const SampledDecompositionConfig& config, std::uint64_t seed) {
    const std::size_t n = oracle.num_vertices();
    if (max_degree <= 1) return all_sparse(n, config.eps);
    const double delta = config.delta();

    const double rate = config.friend_rate.value_or(friend_sample_rate(n, max_degree, delta));
    auto sample = sample_friend_set(n, rate, derive_seed(seed, "friend"));
    std::vector<char> in_sample(n, 0);
    for (Vertex s : sample) in_sample[s] = 1;
    std::vector<std::vector<Vertex>> neighborhoods(sample.size());
    std::vector<std::size_t> index(n, 0);
    for (std::size_t i = 0; i < sample.size(); ++i) index[sample[i]] = i;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const Vertex s = sample[i];
        for (Vertex w = 0; w < n; ++w) {
            if (w == s || (in_sample[w] && w < s)) continue;
            if (oracle.pair(s, w)) {
                neighborhoods[i].push_back(w);
                if (in_sample[w]) neighborhoods[index[w]].push_back(s);
            }
        }
    }
    SampledDecomposition out;
    out.oracle = FriendOracle(n, max_degree, delta, rate, sample, neighborhoods);
    const Graph known = out.oracle.sample_graph();
    const bool everything_known = out.oracle.covers_all_vertices();

    auto answer = [&](Vertex u, Vertex v) {
        if (in_sample[u] || in_sample[v]) return known.has_edge(u, v);
        return oracle.pair(u, v);
    };
    auto sample_slots = [&](double p, std::uint64_t slot_seed) {
        std::vector<Edge> found;
        if (everything_known && p >= 1.0) {
            found.assign(known.edges().begin(), known.edges().end());
            return found;
        }
        Rng rng(slot_seed);
        detail::for_each_bernoulli_pair(n, p, rng, [&](Vertex u, Vertex v) {
            if (answer(u, v)) found.push_back({u, v});
        });
        return found;
    };

    const double dense_rate = config.dense_rate.value_or(friend_sample_rate(n, max_degree, delta));
    const double hs_rate = config.hs_rate.value_or(hs_sample_rate(n, max_degree, config.c_cut));
    auto dense_samples = sample_slots(dense_rate, derive_seed(seed, "dense-slots"));
    auto hs_samples = sample_slots(hs_rate, derive_seed(seed, "hs-slots"));

    out.dense_exhaustive = dense_rate >= 1.0;
    out.hs_exhaustive = hs_rate >= 1.0;
    out.dense_threshold = (1.0 - 1.5 * delta) * static_cast<double>(max_degree) * std::min(1.0, dense_rate);
    out.dense = dense_from_samples(n, out.oracle, dense_samples, out.dense_threshold);
    out.hs_candidates = hs_samples.size();
    auto cliques = cliques_from_samples(n, max_degree, delta, out.dense, out.oracle, hs_samples);

    std::vector<Edge> learned = dense_samples;
    learned.insert(learned.end(), hs_samples.begin(), hs_samples.end());
    out.knowledge = merge_knowledge(n, known, std::move(learned));
    out.decomposition = make_decomposition(out.knowledge, config.eps, std::move(cliques));
    return out;
}

struct StreamDecompositionSketch::State {
    std::size_t n = 0;
    std::size_t max_degree = 0;
    SampledDecompositionConfig config;
    bool degenerate = false;
    double rate = 1.0;
    std::vector<Vertex> sample;
    std::vector<std::int64_t> position;  // index in sample or -1
    std::vector<std::unique_ptr<L0Sampler>> friend_samplers;
    std::unique_ptr<L0Sampler> edge_recovery;
    std::unique_ptr<L0Sampler> dense_sampler;
    std::unique_ptr<L0Sampler> hs_sampler;
    std::uint64_t dense_budget = 0;
    std::uint64_t hs_budget = 0;
    bool dense_exhaustive = false;
    bool hs_exhaustive = false;
};

StreamDecompositionSketch::StreamDecompositionSketch(std::size_t n, std::size_t max_degree,
                                                     const SampledDecompositionConfig& config, SamplerBackend backend,
                                                     std::uint64_t seed, SpaceAccountant* accountant)
    : state_(std::make_unique<State>()) {
    auto& st = *state_;
    st.n = n;
    st.max_degree = max_degree;
    st.config = config;
    st.degenerate = max_degree <= 1 || n < 2;
    if (st.degenerate) return;
    const double delta = config.delta();
    st.rate = config.friend_rate.value_or(friend_sample_rate(n, max_degree, delta));
    st.sample = sample_friend_set(n, st.rate, derive_seed(seed, "friend"));
    st.position.assign(n, -1);
    for (std::size_t i = 0; i < st.sample.size(); ++i) {
        const Vertex s = st.sample[i];
        st.position[s] = static_cast<std::int64_t>(i);
        SamplerConfig cfg;
        cfg.k = max_degree;
        cfg.mode = SampleMode::without_replacement;
        cfg.backend = backend;
        cfg.seed = derive_seed(seed, "friend-sampler", s);
        cfg.sampling_pool = false;
        st.friend_samplers.push_back(
            std::make_unique<L0Sampler>(PairUniverse::all_incident(n, s), cfg, accountant, "friend_samplers"));
    }
    if (st.sample.size() == n) {
        st.dense_exhaustive = st.hs_exhaustive = true;
        return;
    }
    const std::uint64_t limit = max_live_edges(n, max_degree);
    st.dense_budget = config.dense_samples.value_or(stream_dense_sample_count(n, delta));
    st.hs_budget = config.hs_samples.value_or(stream_hs_sample_count(n, delta, config.c_cut));
    st.dense_exhaustive = st.dense_budget >= limit;
    st.hs_exhaustive = st.hs_budget >= limit;
    if (st.dense_exhaustive || st.hs_exhaustive) {
        SamplerConfig cfg;
        cfg.k = static_cast<std::size_t>(limit);
        cfg.backend = backend;
        cfg.seed = derive_seed(seed, "edge-recovery");
        cfg.sampling_pool = false;
        st.edge_recovery = std::make_unique<L0Sampler>(PairUniverse::all_pairs(n), cfg, accountant, "edge_recovery");
    }
    if (!st.dense_exhaustive) {
        SamplerConfig cfg;
        cfg.k = static_cast<std::size_t>(std::max<std::uint64_t>(1, st.dense_budget));
        cfg.mode = SampleMode::with_replacement;
        cfg.backend = backend;
        cfg.seed = derive_seed(seed, "dense-sampler");
        st.dense_sampler = std::make_unique<L0Sampler>(PairUniverse::all_pairs(n), cfg, accountant, "dense_sampler");
    }
    if (!st.hs_exhaustive) {
        SamplerConfig cfg;
        cfg.k = static_cast<std::size_t>(std::max<std::uint64_t>(1, st.hs_budget));
        cfg.backend = backend;
        cfg.seed = derive_seed(seed, "hs-sampler");
        st.hs_sampler = std::make_unique<L0Sampler>(PairUniverse::all_pairs(n), cfg, accountant, "hs_sampler");
    }
}

StreamDecompositionSketch::~StreamDecompositionSketch() = default;
StreamDecompositionSketch::StreamDecompositionSketch(StreamDecompositionSketch&&) noexcept = default;
StreamDecompositionSketch& StreamDecompositionSketch::operator=(StreamDecompositionSketch&&) noexcept = default;

std::size_t StreamDecompositionSketch::friend_sample_size() const { return state_->sample.size(); }

void StreamDecompositionSketch::process(const StreamEvent& event) {
    auto& st = *state_;
    if (st.degenerate) return;
    const Edge e = make_edge(event.edge.u, event.edge.v);
    const int delta = event.kind == StreamEvent::Kind::insert ? 1 : -1;
    if (st.position[e.u] >= 0) st.friend_samplers[static_cast<std::size_t>(st.position[e.u])]->update(e, delta);
    if (st.position[e.v] >= 0) st.friend_samplers[static_cast<std::size_t>(st.position[e.v])]->update(e, delta);
    if (st.edge_recovery) st.edge_recovery->update(e, delta);
    if (st.dense_sampler) st.dense_sampler->update(e, delta);
    if (st.hs_sampler) st.hs_sampler->update(e, delta);
}

SampledDecomposition StreamDecompositionSketch::finalize() const {
    const auto& st = *state_;
    if (st.degenerate) return all_sparse(st.n, st.config.eps);
    const double delta = st.config.delta();
    auto recover = [](const L0Sampler& sampler, const std::string& name) {
        try {
            return sampler.recover();
        } catch (const RecoveryFailure& err) {
            throw RecoveryFailure(name + ": " + err.what());
        }
    };

    std::vector<std::vector<Vertex>> neighborhoods(st.sample.size());
    for (std::size_t i = 0; i < st.sample.size(); ++i) {
        const Vertex s = st.sample[i];
        const auto& sampler = *st.friend_samplers[i];
        if (sampler.live_support() > st.max_degree) {
            throw DegreeBoundExceeded("vertex " + std::to_string(s) + " ends the stream with degree " +
                                      std::to_string(sampler.live_support()) + " > " + std::to_string(st.max_degree));
        }
        for (const auto& e : recover(sampler, "friend sampler of vertex " + std::to_string(s))) {
            neighborhoods[i].push_back(e.u == s ? e.v : e.u);
        }
    }
    SampledDecomposition out;
    out.oracle = FriendOracle(st.n, st.max_degree, delta, st.rate, st.sample, neighborhoods);
    out.dense_exhaustive = st.dense_exhaustive;
    out.hs_exhaustive = st.hs_exhaustive;

    Graph known = out.oracle.sample_graph();
    std::vector<Edge> all_edges;
    if (out.oracle.covers_all_vertices()) {
        all_edges.assign(known.edges().begin(), known.edges().end());
    } else if (st.edge_recovery) {
        all_edges = recover(*st.edge_recovery, "edge recovery sampler");
    }

    std::vector<Edge> dense_samples, hs_samples;
    if (st.dense_exhaustive) {
        dense_samples = all_edges;
        out.dense_threshold = (1.0 - delta) * static_cast<double>(st.max_degree);
    } else {
        dense_samples = recover(*st.dense_sampler, "dense-detection sampler");
        out.dense_threshold = (1.0 - delta) * static_cast<double>(st.dense_budget) / static_cast<double>(st.n);
    }
    hs_samples = st.hs_exhaustive ? all_edges : recover(*st.hs_sampler, "H_s sampler");

    out.dense = dense_from_samples(st.n, out.oracle, dense_samples, out.dense_threshold);
    out.hs_candidates = hs_samples.size();
    auto cliques = cliques_from_samples(st.n, st.max_degree, delta, out.dense, out.oracle, hs_samples);

    std::vector<Edge> learned = all_edges;
    learned.insert(learned.end(), dense_samples.begin(), dense_samples.end());
    learned.insert(learned.end(), hs_samples.begin(), hs_samples.end());
    out.knowledge = merge_knowledge(st.n, known, std::move(learned));
    out.decomposition = make_decomposition(out.knowledge, st.config.eps, std::move(cliques));
    return out;
}

}  // namespace pscolor
