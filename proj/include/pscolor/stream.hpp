#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pscolor/graph.hpp"

namespace pscolor {

struct StreamEvent {
    enum class Kind : std::uint8_t { insert, remove };
    Kind kind = Kind::insert;
    Edge edge;
    bool operator==(const StreamEvent&) const = default;
};

/// Insert/delete sequence whose net effect is `g`. round(churn * m) extra
/// pairs are touched: absent pairs are inserted then deleted, present pairs
/// get an extra delete/insert cycle before their final insert.
std::vector<StreamEvent> to_stream(const Graph& g, double churn, std::uint64_t seed);

/// Multiset accumulator; throws StreamError on a delete of an absent edge or
/// a pair whose final multiplicity exceeds one.
Graph replay_stream(std::size_t n, const std::vector<StreamEvent>& events);

struct StreamFile {
    std::size_t n = 0;
    std::size_t max_degree = 0;
    std::vector<StreamEvent> events;
};

/// Text format: header "n delta count", then lines "+ u v" or "- u v".
void write_stream(std::ostream& out, const StreamFile& stream);
StreamFile read_stream(std::istream& in);

}  // namespace pscolor
