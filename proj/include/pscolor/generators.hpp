#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "pscolor/graph.hpp"

namespace pscolor {

enum class GeneratorModel { gnp_capped, regular_like, clique_collection, coloring_hard, matching_hard, union_noise };

GeneratorModel parse_generator_model(const std::string& name);
std::string to_string(GeneratorModel model);

/// Model-specific parameters by name:
///   gnp_capped:        n, delta, p (default delta/(n-1))
///   regular_like:      n, d
///   clique_collection: size, count
///   coloring_hard:     n (perfect square)
///   matching_hard:     n (multiple of 6)
///   union:             size, count, p, delta (cliques plus capped G(n,p) noise)
struct GeneratorSpec {
    GeneratorModel model = GeneratorModel::gnp_capped;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
};

Graph generate(const GeneratorSpec& spec);

/// G(n,p) where an edge is skipped if either endpoint already has degree `cap`.
Graph generate_gnp_capped(std::size_t n, double p, std::size_t cap, std::uint64_t seed);
Graph generate_regular_like(std::size_t n, std::size_t d, std::uint64_t seed);
Graph generate_clique_collection(std::size_t clique_size, std::size_t count);
Graph generate_coloring_hard(std::size_t n, std::uint64_t seed);
Graph generate_matching_hard(std::size_t n, std::uint64_t seed);
Graph generate_noisy_cliques(std::size_t clique_size, std::size_t count, double p, std::size_t cap,
                             std::uint64_t seed);

}  // namespace pscolor
