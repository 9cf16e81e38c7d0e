#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace clmn {

/// Deterministic random generator (splitmix64 core). Standard-library
/// distributions are implementation-defined, so everything that must be
/// reproducible across toolchains draws from this instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform index in [0, n). n must be positive.
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool coin() { return (next_u64() & 1u) != 0; }

    /// Standard normal via Box-Muller; the paired value is cached.
    double gaussian();

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Independent child stream derived from this stream's seed and a label.
    /// Does not advance the parent. Distinct labels give distinct streams.
    Rng fork(std::string_view label) const;

private:
    std::uint64_t state_;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

/// Named sub-seed so components (folds, sampler, init) can be reproduced
/// in isolation from the single run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace clmn
