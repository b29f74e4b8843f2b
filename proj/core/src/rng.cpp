#include "qrom/rng.hpp"

namespace qrom {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t prf64(std::uint64_t key, std::uint64_t counter) {
    return mix64(mix64(key) ^ mix64(counter * 0xD1B54A32D192ED03ULL + 1));
}

std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
    if (bound <= 1)
        return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        std::uint64_t v = rng();
        if (v < limit)
            return v % bound;
    }
}

double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace qrom
