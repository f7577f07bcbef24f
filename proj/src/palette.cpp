#include "pscolor/palette.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "pscolor/random.hpp"

namespace pscolor {

namespace {

class ClassBitsets {
public:
    ClassBitsets(const Palette& palette, const ColorClasses& classes)
        : words_((palette.num_vertices() + 63) / 64), bits_(classes.num_colors() * words_, 0) {
        for (Color c = 1; c <= classes.num_colors(); ++c) {
            std::uint64_t* row = &bits_[(c - 1) * words_];
            for (Vertex v : classes.members(c)) row[v / 64] |= 1ULL << (v % 64);
        }
    }

    /// Union of the classes of v's colors.
    void neighborhood(const Palette& palette, Vertex v, std::vector<std::uint64_t>& out) const {
        out.assign(words_, 0);
        for (Color c : palette.list(v)) {
            const std::uint64_t* row = &bits_[(c - 1) * words_];
            for (std::size_t w = 0; w < words_; ++w) out[w] |= row[w];
        }
    }

private:
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace

Palette::Palette(PaletteParams params, const Batches& batches) : n_(batches[0].size()), params_(params) {
    const std::size_t colors = params_.max_degree + 1;
    for (std::size_t b = 0; b < 3; ++b) {
        if (batches[b].size() != n_) throw InvalidArgument("palette batches disagree on vertex count");
        auto& off = batch_offsets_[b];
        off.assign(n_ + 1, 0);
        for (std::size_t v = 0; v < n_; ++v) {
            for (Color c : batches[b][v]) {
                if (c < 1 || c > colors) {
                    throw InvalidArgument("palette color " + std::to_string(c) + " outside [1, " +
                                          std::to_string(colors) + "]");
                }
            }
            off[v + 1] = off[v] + batches[b][v].size();
            batch_colors_[b].insert(batch_colors_[b].end(), batches[b][v].begin(), batches[b][v].end());
        }
    }
    list_offsets_.assign(n_ + 1, 0);
    std::vector<Color> merged;
    for (std::size_t v = 0; v < n_; ++v) {
        merged.clear();
        for (std::size_t b = 0; b < 3; ++b) {
            auto part = batch(b, static_cast<Vertex>(v));
            merged.insert(merged.end(), part.begin(), part.end());
        }
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        list_colors_.insert(list_colors_.end(), merged.begin(), merged.end());
        list_offsets_[v + 1] = list_colors_.size();
    }
}

bool Palette::contains(Vertex v, Color c) const {
    auto l = list(v);
    return std::binary_search(l.begin(), l.end(), c);
}

bool Palette::batch_contains(std::size_t b, Vertex v, Color c) const {
    auto l = batch(b, v);
    return std::find(l.begin(), l.end(), c) != l.end();
}

bool Palette::lists_intersect(Vertex u, Vertex v) const {
    auto a = list(u);
    auto b = list(v);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return false;
}

Palette sample_palettes_bernoulli(std::size_t n, std::size_t max_degree, double alpha, double eps,
                                  std::uint64_t seed) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
    const std::size_t colors = max_degree + 1;
    const double log_n = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
    PaletteParams params;
    params.mode = PaletteMode::bernoulli;
    params.max_degree = max_degree;
    params.alpha = alpha;
    params.eps = eps;
    params.seed = seed;
    params.probability = std::min(1.0, alpha * log_n / (3.0 * eps * eps * static_cast<double>(colors)));
    params.all_colors = static_cast<double>(colors) <= alpha * log_n / (eps * eps);
    const double p = params.all_colors ? 1.0 : params.probability;

    Rng rng(derive_seed(seed, "palette"));
    Palette::Batches batches;
    for (auto& b : batches) b.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t b = 0; b < 3; ++b) {
            auto& out = batches[b][v];
            if (p >= 1.0) {
                out.resize(colors);
                std::iota(out.begin(), out.end(), Color{1});
            } else {
                for (std::uint64_t idx = rng.geometric_skip(p); idx < colors; idx += 1 + rng.geometric_skip(p)) {
                    out.push_back(static_cast<Color>(idx + 1));
                }
            }
            rng.shuffle(std::span<Color>(out));
        }
    }
    return Palette(params, batches);
}

Palette sample_palettes_uniform(std::size_t n, std::size_t max_degree, std::size_t list_size, std::uint64_t seed) {
    const std::size_t colors = max_degree + 1;
    if (list_size < 1 || list_size > colors) {
        throw InvalidArgument("list size K=" + std::to_string(list_size) + " outside [1, " + std::to_string(colors) + "]");
    }
    PaletteParams params;
    params.mode = PaletteMode::uniform;
    params.max_degree = max_degree;
    params.list_size = list_size;
    params.seed = seed;

    Rng rng(derive_seed(seed, "palette"));
    std::vector<Color> pool(colors);
    std::iota(pool.begin(), pool.end(), Color{1});
    const std::size_t first = list_size / 3;
    const std::size_t sizes[3] = {first, first, list_size - 2 * first};
    Palette::Batches batches;
    for (auto& b : batches) b.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < list_size; ++i) {
            auto j = i + static_cast<std::size_t>(rng.uniform_below(colors - i));
            std::swap(pool[i], pool[j]);
        }
        std::size_t pos = 0;
        for (std::size_t b = 0; b < 3; ++b) {
            batches[b][v].assign(pool.begin() + static_cast<std::ptrdiff_t>(pos),
                                 pool.begin() + static_cast<std::ptrdiff_t>(pos + sizes[b]));
            pos += sizes[b];
        }
    }
    return Palette(params, batches);
}

std::size_t practical_list_size(std::size_t n, std::size_t max_degree, double c_k) {
    double log_n = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
    auto k = static_cast<std::size_t>(std::ceil(c_k * log_n));
    return std::clamp<std::size_t>(k, 1, max_degree + 1);
}

PaletteChoice parse_palette_choice(const std::string& text) {
    PaletteChoice choice;
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (name == "uniform") {
            choice.mode = PaletteMode::uniform;
            if (!args.empty()) {
                std::size_t used = 0;
                const long k = std::stol(args, &used);
                if (used != args.size() || k < 1) throw InvalidArgument("bad list size");
                choice.list_size = static_cast<std::size_t>(k);
            }
            return choice;
        }
        if (name == "bernoulli") {
            choice.mode = PaletteMode::bernoulli;
            if (!args.empty()) {
                const auto comma = args.find(',');
                if (comma == std::string::npos) throw InvalidArgument("expected alpha,eps");
                choice.alpha = std::stod(args.substr(0, comma));
                choice.eps = std::stod(args.substr(comma + 1));
            }
            return choice;
        }
    } catch (const std::logic_error&) {
    }
    throw InvalidArgument("unrecognized palette '" + text + "' (expected uniform[:K] or bernoulli[:alpha,eps])");
}

std::string to_string(const PaletteChoice& choice) {
    if (choice.mode == PaletteMode::bernoulli) {
        return "bernoulli:" + std::to_string(choice.alpha) + "," + std::to_string(choice.eps);
    }
    return choice.list_size == 0 ? "uniform" : "uniform:" + std::to_string(choice.list_size);
}

Palette make_palette(const PaletteChoice& choice, std::size_t n, std::size_t max_degree, std::uint64_t seed) {
    switch (choice.mode) {
    case PaletteMode::bernoulli:
        return sample_palettes_bernoulli(n, max_degree, choice.alpha, choice.eps, seed);
    case PaletteMode::uniform: {
        const std::size_t k = choice.list_size != 0 ? std::min(choice.list_size, max_degree + 1)
                                                    : practical_list_size(n, max_degree, choice.list_constant);
        return sample_palettes_uniform(n, max_degree, k, seed);
    }
    default:
        throw InvalidArgument("explicit palettes are built directly, not sampled");
    }
}

ColorClasses::ColorClasses(const Palette& palette) : offsets_(palette.num_colors() + 1, 0) {
    const std::size_t n = palette.num_vertices();
    for (Vertex v = 0; v < n; ++v) {
        for (Color c : palette.list(v)) ++offsets_[c];
    }
    for (std::size_t c = 1; c < offsets_.size(); ++c) offsets_[c] += offsets_[c - 1];
    vertices_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (Vertex v = 0; v < n; ++v) {
        for (Color c : palette.list(v)) vertices_[cursor[c - 1]++] = v;
    }
}

std::size_t ColorClasses::max_class_size() const {
    std::size_t best = 0;
    for (std::size_t c = 0; c + 1 < offsets_.size(); ++c) best = std::max(best, offsets_[c + 1] - offsets_[c]);
    return best;
}

ConflictGraph build_conflict_graph_offline(const Graph& g, const Palette& palette) {
    if (g.num_vertices() != palette.num_vertices()) throw InvalidArgument("graph and palette sizes differ");
    std::vector<Edge> kept;
    for (const auto& e : g.edges()) {
        if (palette.lists_intersect(e.u, e.v)) kept.push_back(e);
    }
    return {Graph(g.num_vertices(), std::move(kept)), ConflictProvenance::offline};
}

void for_each_planned_pair(const Palette& palette, const ColorClasses& classes,
                           const std::function<void(Vertex, Vertex)>& visit) {
    const std::size_t n = palette.num_vertices();
    ClassBitsets bits(palette, classes);
    std::vector<std::uint64_t> row;
    for (Vertex u = 0; u < n; ++u) {
        bits.neighborhood(palette, u, row);
        for (std::size_t w = (u + 1) / 64; w < row.size(); ++w) {
            std::uint64_t word = row[w];
            if (w == (u + 1) / 64) word &= ~0ULL << ((u + 1) % 64);
            while (word != 0) {
                auto v = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
                word &= word - 1;
                visit(u, v);
            }
        }
    }
}

std::vector<Edge> planned_pair_queries(const Palette& palette, const ColorClasses& classes) {
    std::vector<Edge> plan;
    for_each_planned_pair(palette, classes, [&plan](Vertex u, Vertex v) { plan.push_back({u, v}); });
    return plan;
}

ConflictGraph build_conflict_graph_queries(QueryOracle& oracle, const Palette& palette, const ColorClasses& classes) {
    if (oracle.num_vertices() != palette.num_vertices()) throw InvalidArgument("oracle and palette sizes differ");
    std::vector<Edge> found;
    for_each_planned_pair(palette, classes, [&](Vertex u, Vertex v) {
        if (oracle.pair(u, v)) found.push_back({u, v});
    });
    return {Graph(palette.num_vertices(), std::move(found)), ConflictProvenance::queries};
}

std::size_t default_conflict_sampler_k(const Palette& palette) {
    const std::size_t n = palette.num_vertices();
    double mean = n == 0 ? 0.0 : static_cast<double>(palette.total_list_size()) / static_cast<double>(n);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(4.0 * mean * mean)));
}

StreamConflictBuilder::StreamConflictBuilder(const Palette& palette, const ColorClasses& classes,
                                             std::size_t max_degree, std::size_t k_per_vertex,
                                             SamplerBackend backend, std::uint64_t seed, SpaceAccountant* accountant)
    : palette_(&palette),
      n_(palette.num_vertices()),
      k_(std::max<std::size_t>(1, std::min(k_per_vertex, max_degree))),
      requested_k_(k_per_vertex) {
    if (k_per_vertex == 0) throw InvalidArgument("k_per_vertex must be positive");
    samplers_.resize(n_);
    if (n_ < 2) return;
    ClassBitsets bits(palette, classes);
    std::vector<std::uint64_t> row;
    for (Vertex v = 0; v < n_; ++v) {
        bits.neighborhood(palette, v, row);
        std::uint64_t size = 0;
        for (auto w : row) size += static_cast<std::uint64_t>(std::popcount(w));
        if (!row.empty() && ((row[v / 64] >> (v % 64)) & 1ULL)) --size;
        if (size == 0) continue;
        SamplerConfig cfg;
        cfg.k = k_;
        cfg.mode = SampleMode::without_replacement;
        cfg.backend = backend;
        cfg.seed = derive_seed(seed, "conflict-sampler", v);
        cfg.sampling_pool = false;
        const Palette* pal = palette_;
        auto universe = PairUniverse::incident(n_, v, size, [pal, v](Vertex w) { return pal->lists_intersect(v, w); });
        samplers_[v] = std::make_unique<L0Sampler>(std::move(universe), cfg, accountant, "conflict_samplers");
    }
}

void StreamConflictBuilder::process(const StreamEvent& event) {
    Edge e = make_edge(event.edge.u, event.edge.v);
    if (e.u == e.v || e.v >= n_) throw StreamError("stream edge out of range or self-loop");
    if (!palette_->lists_intersect(e.u, e.v)) return;
    int delta = event.kind == StreamEvent::Kind::insert ? 1 : -1;
    samplers_[e.u]->update(e, delta);
    samplers_[e.v]->update(e, delta);
}

ConflictGraph StreamConflictBuilder::finalize() const {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n_; ++v) {
        if (!samplers_[v]) continue;
        const auto support = samplers_[v]->live_support();
        if (support > k_) {
            throw RecoveryFailure("conflict sampler of vertex " + std::to_string(v) + " holds " +
                                  std::to_string(support) + " edges, above k=" + std::to_string(k_) +
                                  " (requested " + std::to_string(requested_k_) + ")");
        }
        std::vector<Edge> recovered;
        try {
            recovered = samplers_[v]->recover();
        } catch (const RecoveryFailure& err) {
            throw RecoveryFailure("conflict sampler of vertex " + std::to_string(v) + ": " + err.what());
        }
        for (const auto& e : recovered) {
            if (e.u == v) edges.push_back(e);  // each edge is kept from its smaller endpoint
        }
    }
    return {Graph(n_, std::move(edges)), ConflictProvenance::stream};
}

ConflictGraph build_conflict_graph_stream(const Palette& palette, const ColorClasses& classes,
                                          const std::vector<StreamEvent>& events, std::size_t max_degree,
                                          std::size_t k_per_vertex, SamplerBackend backend, std::uint64_t seed,
                                          SpaceAccountant* accountant) {
    StreamConflictBuilder builder(palette, classes, max_degree, k_per_vertex, backend, seed, accountant);
    for (const auto& ev : events) builder.process(ev);
    return builder.finalize();
}

}  // namespace pscolor
