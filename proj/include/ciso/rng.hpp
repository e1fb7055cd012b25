#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ciso {

using seed_t = std::uint64_t;

/// splitmix64 finalizer; used to derive independent sub-seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed number `counter` of stream `master`.
constexpr seed_t derive_seed(seed_t master, std::uint64_t counter) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

/// The library's one generator type. Seeded explicitly, never from entropy.
class rng {
public:
    explicit rng(seed_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, bound) by rejection, so results do not depend on the
    /// standard library's distribution implementation.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Bernoulli(1/2).
    bool coin() { return (engine_() >> 63) != 0; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Uniformly random permutation of 0..n-1.
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        shuffle(p);
        return p;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ciso
