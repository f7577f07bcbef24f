#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pscolor/offline_runner.hpp"
#include "pscolor/query_oracle.hpp"

namespace pscolor {

enum class QueryBranch { greedy, sparsification };

struct QueryRunConfig {
    PaletteChoice palette;
    SampledDecompositionConfig decomposition;
    PipelineConfig pipeline;
    /// Greedy runs when max_degree <= floor(branch_factor * sqrt(n)).
    double branch_factor = 1.0;
    bool count_degree_queries = true;
    std::uint64_t seed = 0;
};

struct QueryResourceReport {
    QueryBranch branch = QueryBranch::greedy;
    std::uint64_t degree_q = 0;
    std::uint64_t neighbor_q = 0;
    std::uint64_t pair_q = 0;
    std::uint64_t conflict_pair_q = 0;
    std::uint64_t decomposition_pair_q = 0;
    std::uint64_t fallback_neighbor_q = 0;
    std::uint64_t total = 0;  // degree_q is left out when not counted
    std::uint64_t baseline_m = 0;
};

struct QueryRunResult {
    ColoringRun run;
    QueryResourceReport resources;
};

/// Ascending vertices, each reading its full adjacency by neighbor queries and
/// taking the smallest color no colored neighbor holds.
std::vector<Color> greedy_small_delta(QueryOracle& oracle, std::size_t n);

std::size_t greedy_branch_limit(std::size_t n, double branch_factor = 1.0);

/// `baseline_m` is reported only; the oracle is the sole access to the graph.
QueryRunResult run_query_model(QueryOracle& oracle, std::size_t n, std::size_t max_degree, const QueryRunConfig& config,
                               std::optional<std::uint64_t> baseline_m = std::nullopt);

}  // namespace pscolor
