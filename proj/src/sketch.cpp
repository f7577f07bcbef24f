#include "pscolor/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "pscolor/random.hpp"

namespace pscolor {

namespace {

constexpr std::uint64_t kPrime = (1ULL << 61) - 1;
constexpr std::size_t kTableHashes = 5;

std::uint64_t ceil_log2(std::uint64_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

}  // namespace

PairUniverse PairUniverse::explicit_pairs(std::size_t n, std::vector<Edge> pairs) {
    PairUniverse u(Kind::explicit_set, n, 0);
    for (auto& e : pairs) {
        e = make_edge(e.u, e.v);
        if (e.u == e.v || e.v >= n) throw InvalidArgument("universe pair out of range");
        u.keys_.push_back(u.key(e));
    }
    std::sort(u.keys_.begin(), u.keys_.end());
    u.keys_.erase(std::unique(u.keys_.begin(), u.keys_.end()), u.keys_.end());
    u.size_ = u.keys_.size();
    if (u.size_ == 0) throw InvalidArgument("empty sampler universe");
    return u;
}

PairUniverse PairUniverse::incident(std::size_t n, Vertex center, std::uint64_t size, Membership accepts) {
    if (center >= n) throw InvalidArgument("universe center out of range");
    if (size == 0) throw InvalidArgument("empty sampler universe");
    PairUniverse u(Kind::incident, n, size);
    u.center_ = center;
    u.accepts_ = std::move(accepts);
    return u;
}

PairUniverse PairUniverse::all_incident(std::size_t n, Vertex center) {
    if (n < 2) throw InvalidArgument("empty sampler universe");
    return incident(n, center, n - 1, {});
}

PairUniverse PairUniverse::all_pairs(std::size_t n) {
    if (n < 2) throw InvalidArgument("empty sampler universe");
    return PairUniverse(Kind::all_pairs, n, static_cast<std::uint64_t>(n) * (n - 1) / 2);
}

bool PairUniverse::contains(const Edge& e) const {
    if (e.u >= e.v || e.v >= n_) return false;
    switch (kind_) {
        case Kind::all_pairs: return true;
        case Kind::explicit_set: return std::binary_search(keys_.begin(), keys_.end(), key(e));
        case Kind::incident: {
            Vertex other;
            if (e.u == center_) other = e.v;
            else if (e.v == center_) other = e.u;
            else return false;
            return !accepts_ || accepts_(other);
        }
    }
    return false;
}

void SpaceAccountant::charge(const std::string& structure, std::uint64_t words) {
    breakdown_[structure] += words;
    total_ += words;
}

SamplerBackend parse_sampler_backend(const std::string& name) {
    if (name == "ideal") return SamplerBackend::ideal;
    if (name == "sketch") return SamplerBackend::sketch;
    throw InvalidArgument("unknown sampler backend '" + name + "'");
}

std::string to_string(SamplerBackend backend) {
    return backend == SamplerBackend::ideal ? "ideal" : "sketch";
}

std::uint64_t ideal_sampler_words(std::size_t k, std::size_t n, double constant) {
    double log_n = static_cast<double>(std::max<std::uint64_t>(1, ceil_log2(n)));
    return static_cast<std::uint64_t>(std::ceil(constant * static_cast<double>(k) * log_n * log_n * log_n));
}

L0Sampler::L0Sampler(PairUniverse universe, SamplerConfig config, SpaceAccountant* accountant,
                     const std::string& structure)
    : universe_(std::move(universe)), config_(config) {
    if (config_.k == 0) throw InvalidArgument("sampler needs k >= 1");
    if (config_.backend == SamplerBackend::ideal) {
        declared_words_ = ideal_sampler_words(config_.k, universe_.num_vertices(), config_.space_constant);
    } else {
        fp_seed_ = derive_seed(config_.seed, "fingerprint");
        table_seed_ = derive_seed(config_.seed, "table");
        pool_seed_ = derive_seed(config_.seed, "pool");
        auto capacity = static_cast<std::size_t>(std::min<std::uint64_t>(config_.k, universe_.size()));
        table_width_ = (2 * capacity + 16 + kTableHashes - 1) / kTableHashes;
        table_.assign(table_width_ * kTableHashes, {});
        bool need_pool = config_.sampling_pool &&
                         (config_.mode == SampleMode::with_replacement || universe_.size() > config_.k);
        if (need_pool) {
            pool_size_ = 4 * config_.k;
            pool_levels_ = ceil_log2(universe_.size()) + 2;
            pool_.assign(pool_size_ * pool_levels_, {});
        }
        declared_words_ = 3 * (1 + table_.size() + pool_.size());
    }
    if (accountant != nullptr) accountant->charge(structure, declared_words_);
}

std::uint64_t L0Sampler::fingerprint_of(std::uint64_t key) const { return hash64(key, fp_seed_) % kPrime; }

std::size_t L0Sampler::table_slot(std::uint64_t key, std::size_t hash_index) const {
    return hash_index * table_width_ + hash64(key, table_seed_ + hash_index) % table_width_;
}

void L0Sampler::apply(OneSparseCell& cell, std::uint64_t key, std::uint64_t fp, int delta) const {
    cell.count += delta;
    if (delta > 0) {
        cell.key_sum += key;
        cell.fingerprint = (cell.fingerprint + fp) % kPrime;
    } else {
        cell.key_sum -= key;
        cell.fingerprint = (cell.fingerprint + kPrime - fp) % kPrime;
    }
}

void L0Sampler::process(const StreamEvent& event) {
    Edge e = make_edge(event.edge.u, event.edge.v);
    if (!universe_.contains(e)) return;
    update(e, event.kind == StreamEvent::Kind::insert ? 1 : -1);
}

void L0Sampler::update(const Edge& e, int delta) {
    const std::uint64_t key = universe_.key(e);
    if (config_.backend == SamplerBackend::ideal) {
        auto it = ideal_counts_.try_emplace(key, 0).first;
        it->second += delta;
        if (it->second == 0) ideal_counts_.erase(it);
        return;
    }
    const std::uint64_t fp = fingerprint_of(key);
    apply(total_, key, fp, delta);
    for (std::size_t j = 0; j < kTableHashes; ++j) apply(table_[table_slot(key, j)], key, fp, delta);
    for (std::size_t s = 0; s < pool_size_; ++s) {
        std::uint64_t h = hash64(key, pool_seed_ + s);
        std::size_t level = h == 0 ? pool_levels_ - 1
                                   : std::min<std::size_t>(pool_levels_ - 1, std::countr_zero(h));
        OneSparseCell* cells = &pool_[s * pool_levels_];
        for (std::size_t l = 0; l <= level; ++l) apply(cells[l], key, fp, delta);
    }
}

std::uint64_t L0Sampler::live_support() const {
    if (config_.backend == SamplerBackend::ideal) return ideal_counts_.size();
    return total_.count > 0 ? static_cast<std::uint64_t>(total_.count) : 0;
}

bool L0Sampler::pure_key(const OneSparseCell& cell, std::uint64_t& key) const {
    if (cell.count != 1) return false;
    key = cell.key_sum;
    const std::uint64_t n = universe_.num_vertices();
    if (key >= n * n) return false;
    if (cell.fingerprint != fingerprint_of(key)) return false;
    return universe_.contains(universe_.edge(key));
}

std::vector<std::uint64_t> L0Sampler::ideal_support() const {
    std::vector<std::uint64_t> keys;
    keys.reserve(ideal_counts_.size());
    for (const auto& [key, count] : ideal_counts_) {
        if (count != 1) throw RecoveryFailure("sampler support has multiplicity other than one");
        keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

bool L0Sampler::decode_table(std::vector<std::uint64_t>& keys) const {
    std::vector<OneSparseCell> cells = table_;
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].count == 1) queue.push_back(i);
    }
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        std::uint64_t key = 0;
        if (!pure_key(cells[i], key)) continue;
        keys.push_back(key);
        const std::uint64_t fp = fingerprint_of(key);
        for (std::size_t j = 0; j < kTableHashes; ++j) {
            std::size_t slot = table_slot(key, j);
            apply(cells[slot], key, fp, -1);
            if (cells[slot].count == 1) queue.push_back(slot);
        }
    }
    return std::all_of(cells.begin(), cells.end(), [](const OneSparseCell& c) { return c == OneSparseCell{}; });
}

std::vector<Edge> L0Sampler::recover_sketch() const {
    if (total_.count < 0) throw RecoveryFailure("sampler saw more deletes than inserts");
    const auto support = static_cast<std::uint64_t>(total_.count);
    std::vector<Edge> out;
    if (support == 0) {
        if (!(total_ == OneSparseCell{})) throw RecoveryFailure("sampler state inconsistent with empty support");
        return out;
    }

    if (config_.mode == SampleMode::without_replacement && support <= config_.k) {
        std::vector<std::uint64_t> keys;
        if (decode_table(keys) && keys.size() == support) {
            std::sort(keys.begin(), keys.end());
            for (auto key : keys) out.push_back(universe_.edge(key));
            return out;
        }
    }
    if (pool_size_ == 0) {
        throw RecoveryFailure(support > config_.k ? "support " + std::to_string(support) + " exceeds k=" +
                                                        std::to_string(config_.k)
                                                  : "sparse recovery failed to decode");
    }

    std::vector<std::uint64_t> draws;
    for (std::size_t s = 0; s < pool_size_; ++s) {
        const OneSparseCell* cells = &pool_[s * pool_levels_];
        for (std::size_t l = pool_levels_; l-- > 0;) {
            std::uint64_t key = 0;
            if (pure_key(cells[l], key)) {
                draws.push_back(key);
                break;
            }
        }
    }
    if (config_.mode == SampleMode::with_replacement) {
        if (draws.size() < config_.k) throw RecoveryFailure("too few successful samplers");
        draws.resize(config_.k);
        for (auto key : draws) out.push_back(universe_.edge(key));
        return out;
    }
    const auto wanted = static_cast<std::size_t>(std::min<std::uint64_t>(config_.k, support));
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::uint64_t> distinct;
    for (auto key : draws) {
        if (distinct.size() == wanted) break;
        if (seen.insert(key).second) distinct.push_back(key);
    }
    if (distinct.size() < wanted) {
        throw RecoveryFailure("recovered " + std::to_string(distinct.size()) + " distinct pairs, needed " +
                              std::to_string(wanted));
    }
    std::sort(distinct.begin(), distinct.end());
    for (auto key : distinct) out.push_back(universe_.edge(key));
    return out;
}

std::vector<Edge> L0Sampler::recover() const {
    if (config_.backend == SamplerBackend::sketch) return recover_sketch();

    auto keys = ideal_support();
    std::vector<Edge> out;
    if (keys.empty()) return out;
    Rng rng(derive_seed(config_.seed, "recover"));
    if (config_.mode == SampleMode::with_replacement) {
        for (std::size_t i = 0; i < config_.k; ++i) out.push_back(universe_.edge(keys[rng.uniform_below(keys.size())]));
        return out;
    }
    if (keys.size() > config_.k) {
        for (std::size_t i = 0; i < config_.k; ++i) {
            auto j = i + static_cast<std::size_t>(rng.uniform_below(keys.size() - i));
            std::swap(keys[i], keys[j]);
        }
        keys.resize(config_.k);
        std::sort(keys.begin(), keys.end());
    }
    for (auto key : keys) out.push_back(universe_.edge(key));
    return out;
}

std::vector<std::uint64_t> L0Sampler::state() const {
    std::vector<std::uint64_t> out;
    if (config_.backend == SamplerBackend::ideal) {
        std::vector<std::pair<std::uint64_t, std::int64_t>> items(ideal_counts_.begin(), ideal_counts_.end());
        std::sort(items.begin(), items.end());
        for (const auto& [key, count] : items) {
            out.push_back(key);
            out.push_back(static_cast<std::uint64_t>(count));
        }
        return out;
    }
    auto push = [&out](const OneSparseCell& c) {
        out.push_back(static_cast<std::uint64_t>(c.count));
        out.push_back(c.key_sum);
        out.push_back(c.fingerprint);
    };
    push(total_);
    for (const auto& c : table_) push(c);
    for (const auto& c : pool_) push(c);
    return out;
}

}  // namespace pscolor
