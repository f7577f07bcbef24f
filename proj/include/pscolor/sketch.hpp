#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pscolor/stream.hpp"

namespace pscolor {

/// Candidate pair set P a sampler is defined over.
class PairUniverse {
public:
    using Membership = std::function<bool(Vertex)>;

    static PairUniverse explicit_pairs(std::size_t n, std::vector<Edge> pairs);
    /// Pairs {center, w} with w != center and accepts(w); `size` is |P|.
    static PairUniverse incident(std::size_t n, Vertex center, std::uint64_t size, Membership accepts);
    /// All n-1 pairs incident to center.
    static PairUniverse all_incident(std::size_t n, Vertex center);
    static PairUniverse all_pairs(std::size_t n);

    bool contains(const Edge& e) const;
    std::uint64_t size() const { return size_; }
    std::size_t num_vertices() const { return n_; }
    std::uint64_t key(const Edge& e) const { return static_cast<std::uint64_t>(e.u) * n_ + e.v; }
    Edge edge(std::uint64_t key) const {
        return {static_cast<Vertex>(key / n_), static_cast<Vertex>(key % n_)};
    }

private:
    enum class Kind { explicit_set, incident, all_pairs };
    PairUniverse(Kind kind, std::size_t n, std::uint64_t size) : kind_(kind), n_(n), size_(size) {}

    Kind kind_;
    std::size_t n_;
    std::uint64_t size_;
    Vertex center_ = 0;
    Membership accepts_;
    std::vector<std::uint64_t> keys_;
};

/// Words charged per named structure; charges only accumulate.
class SpaceAccountant {
public:
    void charge(const std::string& structure, std::uint64_t words);
    std::uint64_t words_used() const { return total_; }
    const std::map<std::string, std::uint64_t>& breakdown() const { return breakdown_; }

private:
    std::uint64_t total_ = 0;
    std::map<std::string, std::uint64_t> breakdown_;
};

enum class SampleMode { with_replacement, without_replacement };
/// ideal stores the live support exactly and is charged by formula;
/// sketch keeps linear 1-sparse cells and may fail to recover.
enum class SamplerBackend { ideal, sketch };

SamplerBackend parse_sampler_backend(const std::string& name);
std::string to_string(SamplerBackend backend);

struct SamplerConfig {
    std::size_t k = 1;
    SampleMode mode = SampleMode::without_replacement;
    SamplerBackend backend = SamplerBackend::ideal;
    std::uint64_t seed = 0;
    /// Sketch backend: keep 4k nested-level samplers for supports larger than k.
    bool sampling_pool = true;
    /// Constant c of the ideal-backend charge c * k * ceil(log2 n)^3.
    double space_constant = 1.0;
};

/// Charge for an ideal-backend sampler over pairs of an n-vertex set.
std::uint64_t ideal_sampler_words(std::size_t k, std::size_t n, double constant = 1.0);

struct OneSparseCell {
    std::int64_t count = 0;
    std::uint64_t key_sum = 0;
    std::uint64_t fingerprint = 0;
    bool operator==(const OneSparseCell&) const = default;
};

class L0Sampler {
public:
    L0Sampler(PairUniverse universe, SamplerConfig config, SpaceAccountant* accountant = nullptr,
              const std::string& structure = "l0_sampler");

    /// Out-of-universe events are ignored.
    void process(const StreamEvent& event);
    void update(const Edge& e, int delta);

    /// Without replacement: min(k, support) distinct live pairs, sorted.
    /// With replacement: k draws. Throws RecoveryFailure (sketch backend only).
    std::vector<Edge> recover() const;

    /// Exact live support size, known from the aggregate counter.
    std::uint64_t live_support() const;
    std::uint64_t declared_words() const { return declared_words_; }
    const PairUniverse& universe() const { return universe_; }
    const SamplerConfig& config() const { return config_; }

    /// Canonical serialization of the linear state, for bit-exact comparisons.
    std::vector<std::uint64_t> state() const;

private:
    std::vector<std::uint64_t> ideal_support() const;
    std::vector<Edge> recover_sketch() const;
    bool decode_table(std::vector<std::uint64_t>& keys) const;
    bool pure_key(const OneSparseCell& cell, std::uint64_t& key) const;
    void apply(OneSparseCell& cell, std::uint64_t key, std::uint64_t fp, int delta) const;
    std::uint64_t fingerprint_of(std::uint64_t key) const;
    std::size_t table_slot(std::uint64_t key, std::size_t hash_index) const;

    PairUniverse universe_;
    SamplerConfig config_;
    std::uint64_t declared_words_ = 0;

    std::unordered_map<std::uint64_t, std::int64_t> ideal_counts_;

    // Sketch backend: aggregate cell, invertible table of 1-sparse cells for
    // exact recovery of supports up to k, optional pool of nested-level samplers.
    OneSparseCell total_;
    std::size_t table_width_ = 0;
    std::vector<OneSparseCell> table_;
    std::size_t pool_levels_ = 0;
    std::size_t pool_size_ = 0;
    std::vector<OneSparseCell> pool_;
    std::uint64_t fp_seed_ = 0;
    std::uint64_t table_seed_ = 0;
    std::uint64_t pool_seed_ = 0;
};

}  // namespace pscolor
