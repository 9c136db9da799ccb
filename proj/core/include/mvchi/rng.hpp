/**
 * Tiny deterministic RNG (splitmix64). The standard <random> distributions
 * are implementation-defined, which would break byte-identical runs across
 * platforms, so seeded corpora are drawn from this instead.
 */

#ifndef MVCHI_RNG_HPP
#define MVCHI_RNG_HPP

#include <cstdint>

#include "mvchi/numeric.hpp"

namespace mvchi {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Random rational in [0,1] with denominator at most max_den.
    Rat unit_rational(std::uint64_t max_den) {
        std::uint64_t d = 1 + below(max_den);
        std::uint64_t n = below(d + 1);
        return Rat(Int(n), Int(d));
    }

private:
    std::uint64_t state_;
};

} // namespace mvchi

#endif // MVCHI_RNG_HPP
