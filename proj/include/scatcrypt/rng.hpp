#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string_view>
#include <vector>

namespace scatcrypt {

/// splitmix64 finalizer; used to derive child seeds from a root seed so that
/// every consumer (state sampling, per-block shuffles, per-key coefficient
/// draws) gets its own independent, reproducible stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t h, std::uint64_t token) {
    return splitmix64(h ^ token);
}

/// derive_seed(root, "key", q, qp, block) -> child seed, deterministic in all
/// arguments.  String tokens are hashed, integral tokens mixed directly.
template <typename... Tokens>
std::uint64_t derive_seed(std::uint64_t root, Tokens... tokens) {
    std::uint64_t h = splitmix64(root);
    auto absorb = [&h](auto token) {
        if constexpr (std::is_convertible_v<decltype(token), std::string_view>) {
            h = mix_seed(h, fnv1a64(token));
        } else {
            h = mix_seed(h, static_cast<std::uint64_t>(token));
        }
    };
    (absorb(tokens), ...);
    return h;
}

/// Seeded stream with explicitly specified double generation.  mt19937_64 is
/// fully pinned by the standard and the [0,1) mapping below avoids the
/// implementation-defined std distributions, so identical seeds give
/// identical values on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform on (-1, 1]; the canonical range for key phase factors.
    double phase_unit() { return 1.0 - 2.0 * uniform01(); }

    /// Uniform integer in [0, n) by rejection; unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Fisher-Yates permutation of {1, ..., n}.
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 1);
        for (int i = n - 1; i > 0; --i)
            std::swap(p[static_cast<std::size_t>(i)], p[below(static_cast<std::uint64_t>(i) + 1)]);
        return p;
    }

    /// Uniformly random k-subset of {1, ..., n}, returned sorted ascending.
    std::vector<int> subset(int n, int k) {
        std::vector<int> p = permutation(n);
        p.resize(static_cast<std::size_t>(k));
        std::sort(p.begin(), p.end());
        return p;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace scatcrypt
