#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace pscolor {

std::uint64_t splitmix64(std::uint64_t x);

/// Independent sub-seed for a named consumer, e.g. derive_seed(seed, "palette").
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index);

/// Seeded 64-bit hash; a bijection on x for a fixed seed.
std::uint64_t hash64(std::uint64_t x, std::uint64_t seed);

/// mt19937_64 with hand-written distributions so results do not depend on the
/// standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform in [0, 1).
    double uniform_real();
    bool bernoulli(double p);
    /// Number of failures before the first success of a Bernoulli(p) sequence.
    std::uint64_t geometric_skip(double p);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pscolor
