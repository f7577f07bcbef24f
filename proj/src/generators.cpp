#include "pscolor/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "pair_sampling.hpp"
#include "pscolor/random.hpp"

namespace pscolor {

namespace {

double param(const GeneratorSpec& spec, const std::string& name) {
    auto it = spec.params.find(name);
    if (it == spec.params.end()) throw InvalidArgument("missing generator parameter '" + name + "'");
    return it->second;
}

double param_or(const GeneratorSpec& spec, const std::string& name, double fallback) {
    auto it = spec.params.find(name);
    return it == spec.params.end() ? fallback : it->second;
}

std::size_t count_param(const GeneratorSpec& spec, const std::string& name) {
    double x = param(spec, name);
    if (x < 0 || x != std::floor(x)) throw InvalidArgument("parameter '" + name + "' must be a non-negative integer");
    return static_cast<std::size_t>(x);
}

std::vector<Edge> gnp_candidates(std::size_t n, double p, Rng& rng) {
    std::vector<Edge> out;
    detail::for_each_bernoulli_pair(n, p, rng, [&out](Vertex u, Vertex v) { out.push_back({u, v}); });
    return out;
}

void add_capped(std::vector<Edge>& candidates, std::vector<std::size_t>& degree, std::size_t cap,
                std::vector<Edge>& edges, Rng& rng) {
    rng.shuffle(std::span<Edge>(candidates));
    for (const auto& e : candidates) {
        if (degree[e.u] < cap && degree[e.v] < cap) {
            ++degree[e.u];
            ++degree[e.v];
            edges.push_back(e);
        }
    }
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
}

std::vector<Vertex> random_permutation(std::size_t count, Rng& rng) {
    std::vector<Vertex> perm(count);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    rng.shuffle(std::span<Vertex>(perm));
    return perm;
}

}  // namespace

GeneratorModel parse_generator_model(const std::string& name) {
    if (name == "gnp_capped") return GeneratorModel::gnp_capped;
    if (name == "regular_like") return GeneratorModel::regular_like;
    if (name == "clique_collection") return GeneratorModel::clique_collection;
    if (name == "coloring_hard") return GeneratorModel::coloring_hard;
    if (name == "matching_hard") return GeneratorModel::matching_hard;
    if (name == "union") return GeneratorModel::union_noise;
    throw InvalidArgument("unknown generator model '" + name + "'");
}

std::string to_string(GeneratorModel model) {
    switch (model) {
        case GeneratorModel::gnp_capped: return "gnp_capped";
        case GeneratorModel::regular_like: return "regular_like";
        case GeneratorModel::clique_collection: return "clique_collection";
        case GeneratorModel::coloring_hard: return "coloring_hard";
        case GeneratorModel::matching_hard: return "matching_hard";
        case GeneratorModel::union_noise: return "union";
    }
    return "unknown";
}

Graph generate(const GeneratorSpec& spec) {
    switch (spec.model) {
        case GeneratorModel::gnp_capped: {
            std::size_t n = count_param(spec, "n");
            std::size_t cap = count_param(spec, "delta");
            double p = param_or(spec, "p", n > 1 ? static_cast<double>(cap) / static_cast<double>(n - 1) : 0.0);
            return generate_gnp_capped(n, p, cap, spec.seed);
        }
        case GeneratorModel::regular_like:
            return generate_regular_like(count_param(spec, "n"), count_param(spec, "d"), spec.seed);
        case GeneratorModel::clique_collection:
            return generate_clique_collection(count_param(spec, "size"), count_param(spec, "count"));
        case GeneratorModel::coloring_hard:
            return generate_coloring_hard(count_param(spec, "n"), spec.seed);
        case GeneratorModel::matching_hard:
            return generate_matching_hard(count_param(spec, "n"), spec.seed);
        case GeneratorModel::union_noise: {
            std::size_t size = count_param(spec, "size");
            return generate_noisy_cliques(size, count_param(spec, "count"), param(spec, "p"),
                                          static_cast<std::size_t>(param_or(spec, "delta", static_cast<double>(size))),
                                          spec.seed);
        }
    }
    throw InvalidArgument("unknown generator model");
}

Graph generate_gnp_capped(std::size_t n, double p, std::size_t cap, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("gnp_capped needs n >= 1");
    if (cap >= n) throw InvalidArgument("degree cap must be below n");
    check_probability(p);
    Rng rng(derive_seed(seed, "gnp_capped"));
    auto candidates = gnp_candidates(n, p, rng);
    std::vector<std::size_t> degree(n, 0);
    std::vector<Edge> edges;
    add_capped(candidates, degree, cap, edges, rng);
    return Graph(n, std::move(edges));
}

Graph generate_regular_like(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("regular_like needs n >= 1");
    if (d >= n) throw InvalidArgument("degree must be below n");
    Rng rng(derive_seed(seed, "regular_like"));
    std::vector<Vertex> stubs;
    stubs.reserve(n * d);
    for (std::size_t v = 0; v < n; ++v) stubs.insert(stubs.end(), d, static_cast<Vertex>(v));

    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    std::vector<std::size_t> degree(n, 0);
    // Configuration model with a few reshuffles of the unmatched stubs.
    for (int attempt = 0; attempt < 8 && stubs.size() > 1; ++attempt) {
        rng.shuffle(std::span<Vertex>(stubs));
        std::vector<Vertex> leftover;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            Vertex a = stubs[i], b = stubs[i + 1];
            Edge e = make_edge(a, b);
            if (a != b && seen.insert(static_cast<std::uint64_t>(e.u) * n + e.v).second) {
                edges.push_back(e);
            } else {
                leftover.push_back(a);
                leftover.push_back(b);
            }
        }
        if (stubs.size() % 2 == 1) leftover.push_back(stubs.back());
        stubs = std::move(leftover);
    }
    return Graph(n, std::move(edges));
}

Graph generate_clique_collection(std::size_t clique_size, std::size_t count) {
    if (clique_size < 1 || count < 1) throw InvalidArgument("clique_collection needs size >= 1 and count >= 1");
    std::vector<Edge> edges;
    edges.reserve(count * clique_size * (clique_size - 1) / 2);
    for (std::size_t c = 0; c < count; ++c) {
        auto base = static_cast<Vertex>(c * clique_size);
        for (std::size_t i = 0; i < clique_size; ++i) {
            for (std::size_t j = i + 1; j < clique_size; ++j) {
                edges.push_back({static_cast<Vertex>(base + i), static_cast<Vertex>(base + j)});
            }
        }
    }
    return Graph(clique_size * count, std::move(edges));
}

Graph generate_coloring_hard(std::size_t n, std::uint64_t seed) {
    auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (n == 0 || root * root != n) throw InvalidArgument("coloring_hard needs a perfect-square n");
    if (n < 4) throw InvalidArgument("coloring_hard needs n >= 4 so that the matching reaches every block");
    Rng rng(derive_seed(seed, "coloring_hard"));
    std::vector<Edge> edges;
    edges.reserve(n * root + n / 2);
    for (std::size_t block = 0; block < root; ++block) {
        for (std::size_t i = 0; i < root; ++i) {
            for (std::size_t j = 0; j < root; ++j) {
                edges.push_back({static_cast<Vertex>(block * root + i), static_cast<Vertex>(n + block * root + j)});
            }
        }
    }
    // Perfect matching on V_0 (one vertex left out when n is odd).
    auto perm = random_permutation(n, rng);
    for (std::size_t i = 0; i + 1 < n; i += 2) edges.push_back(make_edge(perm[i], perm[i + 1]));
    return Graph(2 * n, std::move(edges));
}

Graph generate_matching_hard(std::size_t n, std::uint64_t seed) {
    if (n == 0 || n % 6 != 0) throw InvalidArgument("matching_hard needs n divisible by 6");
    Rng rng(derive_seed(seed, "matching_hard"));
    const std::size_t core = n / 6;
    auto left = [](std::size_t i) { return static_cast<Vertex>(i); };
    auto right = [n](std::size_t i) { return static_cast<Vertex>(n + i); };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < core; ++j) edges.push_back({left(i), right(j)});
    }
    for (std::size_t i = 0; i < core; ++i) {
        for (std::size_t j = core; j < n; ++j) edges.push_back({left(i), right(j)});
    }
    auto perm = random_permutation(n - core, rng);
    for (std::size_t i = 0; i < n - core; ++i) edges.push_back({left(core + i), right(core + perm[i])});
    return Graph(2 * n, std::move(edges));
}

Graph generate_noisy_cliques(std::size_t clique_size, std::size_t count, double p, std::size_t cap,
                             std::uint64_t seed) {
    check_probability(p);
    if (cap + 1 < clique_size) throw InvalidArgument("degree cap below clique degree");
    Graph base = generate_clique_collection(clique_size, count);
    const std::size_t n = base.num_vertices();
    if (cap >= n) throw InvalidArgument("degree cap must be below n");
    Rng rng(derive_seed(seed, "union"));
    std::vector<Edge> edges(base.edges().begin(), base.edges().end());
    std::vector<std::size_t> degree(n, clique_size - 1);
    std::vector<Edge> candidates;
    for (const auto& e : gnp_candidates(n, p, rng)) {
        if (e.u / clique_size != e.v / clique_size) candidates.push_back(e);
    }
    add_capped(candidates, degree, cap, edges, rng);
    return Graph(n, std::move(edges));
}

}  // namespace pscolor
