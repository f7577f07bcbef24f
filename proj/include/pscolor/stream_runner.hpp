#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pscolor/offline_runner.hpp"
#include "pscolor/stream.hpp"

namespace pscolor {

struct StreamRunConfig {
    std::size_t n = 0;
    std::size_t max_degree = 0;  // declared before the stream starts
    PaletteChoice palette;
    SampledDecompositionConfig decomposition;
    std::optional<std::size_t> k_per_vertex;  // default_conflict_sampler_k when unset
    SamplerBackend backend = SamplerBackend::ideal;
    PipelineConfig pipeline;
    std::size_t max_attempts = 3;  // sketch backend reruns with a fresh seed
    std::uint64_t seed = 0;
};

struct StreamResourceReport {
    std::uint64_t peak_words = 0;
    std::uint64_t words_at_first_event = 0;
    std::uint64_t words_at_stream_end = 0;
    std::map<std::string, std::uint64_t> breakdown;
    std::size_t pass_count = 1;
    std::uint64_t events_consumed = 0;
    std::size_t attempts = 0;
    std::vector<std::string> failures;  // one entry per failed attempt
    std::size_t conflict_k = 0;
    std::size_t friend_sample_size = 0;
};

struct StreamRunResult {
    ColoringRun run;
    StreamResourceReport resources;
};

/// Seed of attempt i: the run seed for i = 0, derive_seed(seed, "retry", i) after.
std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt);

/// One pass per attempt over `events`. Throws StreamError on malformed events,
/// DegreeBoundExceeded when the final graph exceeds the declared degree, and
/// RecoveryFailure once the attempts are exhausted.
StreamRunResult run_stream(const std::vector<StreamEvent>& events, const StreamRunConfig& config);

/// Ground-truth replay of the stream.
Graph replay_oracle(std::size_t n, const std::vector<StreamEvent>& events);

}  // namespace pscolor
