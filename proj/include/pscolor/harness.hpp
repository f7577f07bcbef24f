#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pscolor/generators.hpp"
#include "pscolor/mpc.hpp"
#include "pscolor/query_runner.hpp"
#include "pscolor/stream_runner.hpp"

namespace pscolor {

inline constexpr int kSchemaVersion = 1;

struct VerificationReport {
    std::vector<Edge> improper_edges;
    std::vector<Vertex> uncolored;
    std::vector<Vertex> out_of_range;
    std::vector<Vertex> off_list;
    bool ok() const { return improper_edges.empty() && uncolored.empty() && out_of_range.empty() && off_list.empty(); }
};

/// Colors must lie in [1, max_degree + 1]; off-list colors count only when
/// strict_list is set and a palette is given.
VerificationReport verify_coloring(const Graph& g, std::span<const Color> colors,
                                   std::optional<std::size_t> max_degree = std::nullopt,
                                   const Palette* palette = nullptr, bool strict_list = false);

/// Ascending vertex order, smallest color unused by earlier neighbors.
std::vector<Color> baseline_greedy(const Graph& g);

std::string to_string(ColoredBy how);

nlohmann::json to_json(const RunReport& report);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const StreamResourceReport& report);
nlohmann::json to_json(const QueryResourceReport& report);
nlohmann::json to_json(const MpcReport& report);
nlohmann::json to_json(const HssDecomposition& decomposition);
/// Lists per vertex, batches included.
nlohmann::json palette_json(const Palette& palette);
nlohmann::json coloring_json(std::span<const Color> colors);
std::vector<Color> coloring_from_json(const nlohmann::json& j);

enum class RunMode { offline, stream, query, mpc };
RunMode parse_run_mode(const std::string& name);
std::string to_string(RunMode mode);

/// One benchmark configuration; `criterion` is 0 for presets outside the acceptance table.
struct BenchCase {
    int criterion = 0;
    std::string instance;
    RunMode mode = RunMode::offline;
    GeneratorSpec generator;
    PaletteChoice palette;
    SamplerBackend backend = SamplerBackend::ideal;
    double churn = 0.0;
    bool strict_list = false;
    bool public_randomness = true;
    std::size_t machines = 16;
};

struct BenchRow {
    int criterion = 0;
    std::string instance;
    std::string mode;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t delta = 0;
    std::size_t m = 0;
    bool valid = false;
    bool list_compliant = false;
    std::size_t fallback_any = 0;
    std::uint64_t peak_words = 0;
    std::uint64_t queries = 0;
    std::size_t rounds = 0;
    std::uint64_t max_machine_words = 0;
    double wall_ms = 0.0;
    std::string error;
};

/// "smoke" (small instances) or "acceptance" (the instances of the acceptance table).
std::vector<BenchCase> bench_preset(const std::string& name);
BenchRow run_bench_case(const BenchCase& bench_case, std::uint64_t seed);
/// Trials run on `workers` threads; rows come back ordered by case then trial.
std::vector<BenchRow> run_bench(const std::vector<BenchCase>& cases, std::size_t trials, std::uint64_t seed,
                                std::size_t workers);
std::vector<std::string> bench_csv_columns();
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace pscolor
