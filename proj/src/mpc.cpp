#include "pscolor/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pscolor/random.hpp"

namespace pscolor {

namespace {

enum Tag : std::uint64_t { kConflict = 1, kFriend = 2, kDense = 4, kHs = 8 };

void sort_inbox(std::vector<Message>& inbox) {
    std::sort(inbox.begin(), inbox.end(), [](const Message& a, const Message& b) {
        return a.from != b.from ? a.from < b.from : a.payload < b.payload;
    });
}

}  // namespace

MpcSimulator::MpcSimulator(std::size_t machine_count, std::uint64_t memory_cap, bool check_order_independence)
    : cap_(memory_cap), check_order_(check_order_independence), inboxes_(machine_count) {
    if (machine_count == 0) throw InvalidArgument("simulator needs at least one machine");
}

void MpcSimulator::check(MachineId m, const char* what, std::uint64_t words) const {
    if (words > cap_) {
        throw MemoryCapExceeded("machine " + std::to_string(m) + " " + what + " " + std::to_string(words) +
                                " words > cap " + std::to_string(cap_) + " in round " + std::to_string(logs_.size() + 1));
    }
}

std::vector<std::vector<Message>> MpcSimulator::deliver(const Step& step, bool reverse, std::vector<MachineRoundLog>& log) {
    const std::size_t count = inboxes_.size();
    std::vector<std::vector<Message>> next(count);
    std::vector<std::uint64_t> out_words(count, 0), state_words(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
        const MachineId m = reverse ? count - 1 - i : i;
        std::uint64_t state = 0;
        auto messages = step(m, inboxes_[m], state);
        check(m, "state", state);
        state_words[m] = state;
        for (auto& msg : messages) {
            if (msg.to >= count) throw InvalidArgument("message to unknown machine " + std::to_string(msg.to));
            msg.from = m;
            out_words[m] += msg.words();
            next[msg.to].push_back(std::move(msg));
        }
        check(m, "outbox", out_words[m]);
    }
    for (MachineId m = 0; m < count; ++m) {
        sort_inbox(next[m]);
        std::uint64_t in_words = 0;
        for (const auto& msg : next[m]) in_words += msg.words();
        check(m, "inbox", in_words);
        if (in_words || out_words[m] || state_words[m]) log.push_back({m, in_words, out_words[m], state_words[m]});
    }
    return next;
}

void MpcSimulator::run_round(const Step& step) {
    RoundLog log;
    log.round = logs_.size() + 1;
    auto next = deliver(step, false, log.machines);
    if (check_order_) {
        std::vector<MachineRoundLog> ignored;
        if (deliver(step, true, ignored) != next) {
            throw std::logic_error("round " + std::to_string(log.round) + " depends on machine order");
        }
    }
    for (const auto& entry : log.machines) {
        max_seen_ = std::max({max_seen_, entry.in_words, entry.out_words, entry.state_words});
    }
    inboxes_ = std::move(next);
    logs_.push_back(std::move(log));
}

void MpcSimulator::charge_local(MachineId m, std::uint64_t state_words) {
    check(m, "local state", state_words);
    max_seen_ = std::max(max_seen_, state_words);
}

std::uint64_t default_memory_cap(std::size_t n) {
    const double ln = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
    return std::max<std::uint64_t>(64, static_cast<std::uint64_t>(std::ceil(8.0 * static_cast<double>(n) * ln * ln)));
}

namespace {

std::vector<std::vector<Edge>> partition_edges(const Graph& g, const MpcConfig& config) {
    std::vector<std::vector<Edge>> parts(config.machine_count);
    const auto edges = g.edges();
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (config.partition == EdgePartition::shuffled) {
        Rng rng(derive_seed(config.seed, "mpc-partition"));
        rng.shuffle(std::span<std::size_t>(order));
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Edge& e = edges[order[i]];
        const std::size_t m = config.partition_hook ? config.partition_hook(order[i], e) : i % config.machine_count;
        if (m >= config.machine_count) throw InvalidArgument("partition hook returned machine " + std::to_string(m));
        parts[m].push_back(e);
    }
    return parts;
}

std::uint64_t edge_tag(const Edge& e, const Palette& palette, const EdgeSelection& sel) {
    std::uint64_t tag = 0;
    if (palette.lists_intersect(e.u, e.v)) tag |= kConflict;
    if (!sel.degenerate) {
        if (sel.touches_friend_set(e)) tag |= kFriend;
        if (sel.dense_slot(e)) tag |= kDense;
        if (sel.hs_slot(e)) tag |= kHs;
    }
    return tag;
}

struct Received {
    std::vector<Edge> conflict;
    std::vector<Edge> relevant;
    std::uint64_t triples = 0;
};

void collect_triples(std::span<const std::uint64_t> words, Received& out) {
    for (std::size_t i = 0; i + 3 <= words.size(); i += 3) {
        ++out.triples;
        const Edge e{static_cast<Vertex>(words[i]), static_cast<Vertex>(words[i + 1])};
        const std::uint64_t tag = words[i + 2];
        if (tag & kConflict) out.conflict.push_back(e);
        if (tag & (kFriend | kDense | kHs)) out.relevant.push_back(e);
    }
}

Graph graph_from(std::size_t n, std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph(n, std::move(edges));
}

}  // namespace

MpcRunResult run_mpc(const Graph& g, const MpcConfig& config) {
    if (config.machine_count == 0) throw InvalidArgument("at least one edge machine is required");
    const std::size_t n = g.num_vertices();
    const std::size_t max_degree = config.max_degree.value_or(g.max_degree());
    if (g.max_degree() > max_degree) {
        throw DegreeBoundExceeded("graph degree " + std::to_string(g.max_degree()) + " exceeds declared " +
                                  std::to_string(max_degree));
    }
    const std::uint64_t cap = config.memory_cap ? config.memory_cap : default_memory_cap(n);
    const std::size_t edge_machines = config.machine_count;
    const MachineId coordinator = edge_machines;
    const std::size_t total_machines = edge_machines + 1 + (config.public_randomness ? 0 : n);
    auto vertex_machine = [&](Vertex v) { return coordinator + 1 + v; };

    const auto parts = partition_edges(g, config);
    // Every machine derives the same lists; with private randomness only the
    // vertex machine of v reads list(v).
    const Palette palette = make_palette(config.palette, n, max_degree, config.seed);
    const EdgeSelection sel = offline_edge_selection(n, max_degree, config.decomposition, config.seed);

    MpcSimulator sim(total_machines, cap, config.check_order_independence);
    MpcRunResult out;
    Received received;
    Palette coordinator_palette;

    if (config.public_randomness) {
        sim.run_round([&](MachineId m, const std::vector<Message>&, std::uint64_t& state) -> std::vector<Message> {
            if (m >= edge_machines) return {};
            const auto& local = parts[m];
            std::vector<Vertex> touched;
            for (const auto& e : local) {
                touched.push_back(e.u);
                touched.push_back(e.v);
            }
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
            state = 2 * local.size();
            for (Vertex v : touched) state += palette.list(v).size();
            Message msg;
            msg.to = coordinator;
            for (const auto& e : local) {
                const std::uint64_t tag = edge_tag(e, palette, sel);
                if (tag == 0) continue;
                msg.payload.insert(msg.payload.end(), {e.u, e.v, tag});
            }
            if (msg.payload.empty()) return {};
            return {std::move(msg)};
        });
        for (const auto& msg : sim.inbox(coordinator)) collect_triples(msg.payload, received);
        coordinator_palette = palette;
    } else {
        // Round 1: edges to both endpoint machines.
        sim.run_round([&](MachineId m, const std::vector<Message>&, std::uint64_t& state) -> std::vector<Message> {
            if (m >= edge_machines) return {};
            const auto& local = parts[m];
            state = 2 * local.size();
            std::vector<std::pair<Vertex, Edge>> routed;
            for (const auto& e : local) {
                routed.push_back({e.u, e});
                routed.push_back({e.v, e});
            }
            std::sort(routed.begin(), routed.end());
            std::vector<Message> msgs;
            for (const auto& [v, e] : routed) {
                if (msgs.empty() || msgs.back().to != vertex_machine(v)) msgs.push_back({0, vertex_machine(v), {}});
                msgs.back().payload.insert(msgs.back().payload.end(), {e.u, e.v});
            }
            return msgs;
        });
        std::vector<std::vector<Edge>> incident(n);
        for (Vertex v = 0; v < n; ++v) {
            for (const auto& msg : sim.inbox(vertex_machine(v))) {
                for (std::size_t i = 0; i + 1 < msg.payload.size(); i += 2) {
                    incident[v].push_back({static_cast<Vertex>(msg.payload[i]), static_cast<Vertex>(msg.payload[i + 1])});
                }
            }
            std::sort(incident[v].begin(), incident[v].end());
        }
        auto own_words = [&](Vertex v) { return 2 * incident[v].size() + palette.list(v).size(); };

        // Round 2: each vertex machine sends its friend-set bit and list to its neighbors.
        sim.run_round([&](MachineId m, const std::vector<Message>&, std::uint64_t& state) -> std::vector<Message> {
            if (m <= coordinator) return {};
            const auto v = static_cast<Vertex>(m - coordinator - 1);
            state = own_words(v);
            std::vector<Message> msgs;
            for (const auto& e : incident[v]) {
                const Vertex w = e.u == v ? e.v : e.u;
                Message msg{0, vertex_machine(w), {v, sel.degenerate ? 0u : static_cast<std::uint64_t>(sel.in_friend_set[v])}};
                auto list = palette.list(v);
                msg.payload.insert(msg.payload.end(), list.begin(), list.end());
                msgs.push_back(std::move(msg));
            }
            return msgs;
        });

        // Round 3: the smaller endpoint tags each edge; every vertex forwards its batches.
        sim.run_round([&](MachineId m, const std::vector<Message>& inbox, std::uint64_t& state) -> std::vector<Message> {
            if (m <= coordinator) return {};
            const auto v = static_cast<Vertex>(m - coordinator - 1);
            state = own_words(v);
            for (const auto& msg : inbox) state += msg.payload.size();
            Message msg{0, coordinator, {v}};
            for (std::size_t b = 0; b < 3; ++b) msg.payload.push_back(palette.batch(b, v).size());
            for (std::size_t b = 0; b < 3; ++b) {
                auto batch = palette.batch(b, v);
                msg.payload.insert(msg.payload.end(), batch.begin(), batch.end());
            }
            auto own = palette.list(v);
            for (const auto& in : inbox) {
                const auto w = static_cast<Vertex>(in.payload[0]);
                if (w < v) continue;
                const Edge e{v, w};
                std::uint64_t tag = 0;
                const auto theirs = std::span<const std::uint64_t>(in.payload).subspan(2);
                const bool shared = std::any_of(theirs.begin(), theirs.end(), [&](std::uint64_t c) {
                    return std::binary_search(own.begin(), own.end(), static_cast<Color>(c));
                });
                if (shared) tag |= kConflict;
                if (!sel.degenerate) {
                    if (sel.in_friend_set[v] || in.payload[1]) tag |= kFriend;
                    if (sel.dense_slot(e)) tag |= kDense;
                    if (sel.hs_slot(e)) tag |= kHs;
                }
                if (tag) msg.payload.insert(msg.payload.end(), {e.u, e.v, tag});
            }
            return {std::move(msg)};
        });

        Palette::Batches batches;
        for (auto& b : batches) b.assign(n, {});
        for (const auto& msg : sim.inbox(coordinator)) {
            const auto& p = msg.payload;
            const auto v = static_cast<Vertex>(p[0]);
            std::size_t pos = 4;
            for (std::size_t b = 0; b < 3; ++b) {
                for (std::uint64_t i = 0; i < p[1 + b]; ++i) batches[b][v].push_back(static_cast<Color>(p[pos++]));
            }
            collect_triples(std::span<const std::uint64_t>(p).subspan(pos), received);
        }
        coordinator_palette = Palette(palette.params(), batches);
    }

    const Graph conflict = graph_from(n, std::move(received.conflict));
    const Graph known = graph_from(n, std::move(received.relevant));
    std::uint64_t coordinator_in = 0;
    for (const auto& msg : sim.inbox(coordinator)) coordinator_in += msg.words();
    // Received edges once, the lists, and one adjacency index shared by the
    // conflict and knowledge views.
    sim.charge_local(coordinator, coordinator_in + coordinator_palette.total_list_size() + 2 * received.triples + n + 1);

    auto sampled = sampled_decomposition_offline(known, max_degree, config.decomposition, config.seed);
    const bool full_view = !sel.degenerate &&
                           std::all_of(sel.in_friend_set.begin(), sel.in_friend_set.end(), [](char c) { return c != 0; });
    NeighborhoodFn neighbors;
    if (full_view) {
        neighbors = [&known](Vertex v) {
            auto span = known.neighbors(v);
            return std::vector<Vertex>(span.begin(), span.end());
        };
    }
    auto result = list_color_pipeline(conflict, sampled.decomposition, coordinator_palette, config.pipeline, neighbors);

    out.run.colors = std::move(result.colors);
    out.run.colored_by = std::move(result.colored_by);
    out.run.report = result.report;
    out.run.decomposition = std::move(sampled.decomposition);
    out.run.conflict = summarize_conflict(conflict, ColorClasses(coordinator_palette));
    out.run.palette = std::move(coordinator_palette);
    auto& r = out.mpc;
    r.rounds = sim.rounds();
    r.memory_cap = cap;
    r.max_words = sim.max_words_seen();
    r.machines = total_machines;
    r.coordinator_in_words = coordinator_in;
    r.forwarded_edges = received.triples;
    r.round_log = sim.logs();
    return out;
}

}  // namespace pscolor
