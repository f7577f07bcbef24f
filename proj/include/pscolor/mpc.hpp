#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pscolor/offline_runner.hpp"

namespace pscolor {

using MachineId = std::size_t;

struct Message {
    MachineId from = 0;
    MachineId to = 0;
    std::vector<std::uint64_t> payload;
    /// payload plus a one-word envelope
    std::uint64_t words() const { return payload.size() + 1; }
    bool operator==(const Message&) const = default;
};

struct MachineRoundLog {
    MachineId machine = 0;
    std::uint64_t in_words = 0;
    std::uint64_t out_words = 0;
    std::uint64_t state_words = 0;
};

struct RoundLog {
    std::size_t round = 0;
    std::vector<MachineRoundLog> machines;  // machines that held state or traffic
};

/// Synchronous rounds with a per-machine word cap on inbox, outbox and state.
class MpcSimulator {
public:
    /// Returns the machine's outgoing messages and reports its state size.
    using Step = std::function<std::vector<Message>(MachineId, const std::vector<Message>& inbox, std::uint64_t& state_words)>;

    MpcSimulator(std::size_t machine_count, std::uint64_t memory_cap, bool check_order_independence = true);

    std::size_t machine_count() const { return inboxes_.size(); }
    std::uint64_t memory_cap() const { return cap_; }
    /// Runs `step` on every machine, audits caps and delivers the messages.
    /// Throws MemoryCapExceeded naming the machine and round.
    void run_round(const Step& step);
    std::size_t rounds() const { return logs_.size(); }
    const std::vector<Message>& inbox(MachineId m) const { return inboxes_[m]; }
    const std::vector<RoundLog>& logs() const { return logs_; }
    std::uint64_t max_words_seen() const { return max_seen_; }
    /// Charges local computation after the last round against the cap.
    void charge_local(MachineId m, std::uint64_t state_words);

private:
    std::vector<std::vector<Message>> deliver(const Step& step, bool reverse, std::vector<MachineRoundLog>& log);
    void check(MachineId m, const char* what, std::uint64_t words) const;

    std::uint64_t cap_;
    bool check_order_;
    std::vector<std::vector<Message>> inboxes_;
    std::vector<RoundLog> logs_;
    std::uint64_t max_seen_ = 0;
};

enum class EdgePartition { round_robin, shuffled };

struct MpcConfig {
    std::size_t machine_count = 16;
    std::uint64_t memory_cap = 0;  // 0 selects default_memory_cap
    bool public_randomness = true;
    EdgePartition partition = EdgePartition::shuffled;
    /// Overrides `partition`: edge index and edge to machine.
    std::function<std::size_t(std::size_t, const Edge&)> partition_hook;
    PaletteChoice palette;
    SampledDecompositionConfig decomposition;
    PipelineConfig pipeline;
    std::optional<std::size_t> max_degree;
    bool check_order_independence = true;
    std::uint64_t seed = 0;
};

/// ceil(8 n ln^2 n) words.
std::uint64_t default_memory_cap(std::size_t n);

struct MpcReport {
    std::size_t rounds = 0;
    std::uint64_t memory_cap = 0;
    std::uint64_t max_words = 0;
    std::size_t cap_violations = 0;
    std::size_t machines = 0;
    std::uint64_t coordinator_in_words = 0;
    std::uint64_t forwarded_edges = 0;
    std::vector<RoundLog> round_log;
};

struct MpcRunResult {
    ColoringRun run;
    MpcReport mpc;
};

/// Machines 0..M-1 hold the input edges, machine M is the coordinator and,
/// with private randomness, machines M+1..M+n act for the vertices.
MpcRunResult run_mpc(const Graph& g, const MpcConfig& config);

}  // namespace pscolor
