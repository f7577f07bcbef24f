#include "pscolor/stream_runner.hpp"

#include "pscolor/random.hpp"

namespace pscolor {

std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt) {
    return attempt == 0 ? seed : derive_seed(seed, "retry", attempt);
}

namespace {

struct AttemptOutcome {
    ConflictGraph conflict;
    SampledDecomposition decomposition;
};

}  // namespace

StreamRunResult run_stream(const std::vector<StreamEvent>& events, const StreamRunConfig& config) {
    const std::size_t n = config.n;
    const std::size_t attempts = config.backend == SamplerBackend::sketch ? std::max<std::size_t>(1, config.max_attempts) : 1;
    StreamRunResult out;
    auto& res = out.resources;

    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        const std::uint64_t seed = attempt_seed(config.seed, attempt);
        SpaceAccountant accountant;
        Palette palette = make_palette(config.palette, n, config.max_degree, seed);
        accountant.charge("palette", palette.total_list_size());
        const ColorClasses classes(palette);
        accountant.charge("color_classes", classes.total_size());
        const std::size_t k = config.k_per_vertex.value_or(default_conflict_sampler_k(palette));
        StreamConflictBuilder conflict_builder(palette, classes, config.max_degree, k, config.backend, seed, &accountant);
        StreamDecompositionSketch decomposition_sketch(n, config.max_degree, config.decomposition, config.backend, seed,
                                                       &accountant);
        std::vector<std::int64_t> degree(n, 0);
        accountant.charge("degree_counters", n);

        res.attempts = attempt + 1;
        res.conflict_k = conflict_builder.effective_k();
        res.friend_sample_size = decomposition_sketch.friend_sample_size();
        res.words_at_first_event = accountant.words_used();
        res.events_consumed = 0;
        for (const auto& event : events) {
            const Edge& e = event.edge;
            if (e.u >= e.v || e.v >= n) {
                throw StreamError("event " + std::to_string(res.events_consumed) + " has invalid pair (" +
                                  std::to_string(e.u) + "," + std::to_string(e.v) + ")");
            }
            const int sign = event.kind == StreamEvent::Kind::insert ? 1 : -1;
            degree[e.u] += sign;
            degree[e.v] += sign;
            conflict_builder.process(event);
            decomposition_sketch.process(event);
            ++res.events_consumed;
        }
        res.words_at_stream_end = accountant.words_used();
        for (Vertex v = 0; v < n; ++v) {
            if (degree[v] < 0) throw StreamError("vertex " + std::to_string(v) + " ends with negative degree");
            if (static_cast<std::size_t>(degree[v]) > config.max_degree) {
                throw DegreeBoundExceeded("vertex " + std::to_string(v) + " ends with degree " + std::to_string(degree[v]) +
                                          " above declared " + std::to_string(config.max_degree));
            }
        }

        AttemptOutcome outcome;
        try {
            outcome.conflict = conflict_builder.finalize();
            outcome.decomposition = decomposition_sketch.finalize();
        } catch (const RecoveryFailure& failure) {
            res.failures.emplace_back(failure.what());
            if (attempt + 1 < attempts) continue;
            throw;
        }
        accountant.charge("recovered_conflict_graph", 2 * outcome.conflict.graph.num_edges());
        accountant.charge("recovered_knowledge", 2 * outcome.decomposition.knowledge.num_edges());

        auto result = list_color_pipeline(outcome.conflict.graph, outcome.decomposition.decomposition, palette,
                                          config.pipeline);
        out.run.colors = std::move(result.colors);
        out.run.colored_by = std::move(result.colored_by);
        out.run.report = result.report;
        out.run.conflict = summarize_conflict(outcome.conflict.graph, classes);
        out.run.decomposition = std::move(outcome.decomposition.decomposition);
        out.run.palette = std::move(palette);
        res.peak_words = accountant.words_used();
        res.breakdown = accountant.breakdown();
        return out;
    }
    throw RecoveryFailure("stream run made no attempt");
}

Graph replay_oracle(std::size_t n, const std::vector<StreamEvent>& events) { return replay_stream(n, events); }

}  // namespace pscolor
