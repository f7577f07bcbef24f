#include "pscolor/stream.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "pscolor/random.hpp"

namespace pscolor {

namespace {

std::uint64_t pair_key(const Edge& e, std::size_t n) {
    return static_cast<std::uint64_t>(e.u) * n + e.v;
}

}  // namespace

std::vector<StreamEvent> to_stream(const Graph& g, double churn, std::uint64_t seed) {
    if (!(churn >= 0.0 && churn <= 1.0)) throw InvalidArgument("churn ratio must lie in [0, 1]");
    const std::size_t n = g.num_vertices();
    const auto total_pairs = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    auto extra = static_cast<std::uint64_t>(std::llround(churn * static_cast<double>(g.num_edges())));
    extra = std::min(extra, total_pairs);

    Rng rng(derive_seed(seed, "stream"));
    std::unordered_set<std::uint64_t> churned;
    std::vector<Edge> churn_pairs;
    while (churn_pairs.size() < extra) {
        auto a = static_cast<Vertex>(rng.uniform_below(n));
        auto b = static_cast<Vertex>(rng.uniform_below(n));
        if (a == b) continue;
        Edge e = make_edge(a, b);
        if (churned.insert(pair_key(e, n)).second) churn_pairs.push_back(e);
    }

    // One token per event; each pair's tokens are labeled alternately after the shuffle.
    std::vector<Edge> tokens(g.edges().begin(), g.edges().end());
    for (const auto& e : churn_pairs) {
        tokens.push_back(e);
        tokens.push_back(e);
    }
    rng.shuffle(std::span<Edge>(tokens));

    std::vector<StreamEvent> events;
    events.reserve(tokens.size());
    std::unordered_map<std::uint64_t, bool> present;
    for (const auto& e : tokens) {
        bool& is_present = present[pair_key(e, n)];
        events.push_back({is_present ? StreamEvent::Kind::remove : StreamEvent::Kind::insert, e});
        is_present = !is_present;
    }
    return events;
}

Graph replay_stream(std::size_t n, const std::vector<StreamEvent>& events) {
    std::unordered_map<std::uint64_t, std::int64_t> count;
    for (const auto& ev : events) {
        Edge e = make_edge(ev.edge.u, ev.edge.v);
        if (e.u == e.v || e.v >= n) throw StreamError("stream edge out of range or self-loop");
        auto& c = count[pair_key(e, n)];
        if (ev.kind == StreamEvent::Kind::insert) {
            ++c;
        } else {
            if (c == 0) {
                throw StreamError("delete of absent edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
            }
            --c;
        }
    }
    std::vector<Edge> edges;
    for (const auto& [key, c] : count) {
        if (c > 1) throw StreamError("stream leaves a multi-edge");
        if (c == 1) edges.push_back({static_cast<Vertex>(key / n), static_cast<Vertex>(key % n)});
    }
    return Graph(n, std::move(edges));
}

void write_stream(std::ostream& out, const StreamFile& stream) {
    out << stream.n << ' ' << stream.max_degree << ' ' << stream.events.size() << '\n';
    for (const auto& ev : stream.events) {
        out << (ev.kind == StreamEvent::Kind::insert ? '+' : '-') << ' ' << ev.edge.u << ' '
            << ev.edge.v << '\n';
    }
}

StreamFile read_stream(std::istream& in) {
    StreamFile result;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("stream: missing header");
    std::istringstream header(line);
    std::size_t count = 0;
    if (!(header >> result.n >> result.max_degree >> count)) throw ParseError("stream: bad header");
    result.events.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw ParseError("stream: truncated at event " + std::to_string(i));
        std::istringstream row(line);
        char sign = 0;
        long long u = -1, v = -1;
        if (!(row >> sign >> u >> v) || (sign != '+' && sign != '-') || u < 0 || v < 0) {
            throw ParseError("stream: bad event line " + std::to_string(i + 2));
        }
        result.events.push_back({sign == '+' ? StreamEvent::Kind::insert : StreamEvent::Kind::remove,
                                 make_edge(static_cast<Vertex>(u), static_cast<Vertex>(v))});
    }
    return result;
}

}  // namespace pscolor
