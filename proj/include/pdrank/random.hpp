#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace pdrank {

/// Reproducible random source: 64-bit Mersenne Twister (std::mt19937_64,
/// whose output sequence is fixed by the standard) with the variate
/// transforms implemented here rather than by std:: distributions, whose
/// algorithms differ between standard libraries. Same seed, same stream,
/// on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [lo, hi].
    double uniform(double lo, double hi);
    /// Uniform integer on [0, n), unbiased (rejection). n must be > 0.
    std::uint64_t index(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t k = values.size(); k > 1; --k) {
            const auto r = static_cast<std::size_t>(index(k));
            std::swap(values[k - 1], values[r]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pdrank
