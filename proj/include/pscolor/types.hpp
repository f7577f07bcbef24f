#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pscolor {

using Vertex = std::uint32_t;
/// Colors are 1-based; 0 is the null color.
using Color = std::uint32_t;
inline constexpr Color kNoColor = 0;

/// Undirected edge stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a dynamic stream deletes an absent edge or leaves a multi-edge.
class StreamError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sketch-mode sampler could not recover its support.
class RecoveryFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The declared maximum degree was exceeded by the input.
class DegreeBoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A machine's in-memory words exceeded its cap.
class MemoryCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProperViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ListViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace pscolor
