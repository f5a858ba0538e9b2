#include "pdrank/random.hpp"

#include <limits>

namespace pdrank {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (lo == hi) {
        return lo;
    }
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::index(std::uint64_t n) {
    // reject the tail that would bias the modulo
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r = engine_();
    while (r >= limit) {
        r = engine_();
    }
    return r % n;
}

}  // namespace pdrank
