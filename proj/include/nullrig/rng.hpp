#pragma once

#include <cstdint>

namespace nullrig {

// splitmix64: tiny, seedable, and identical output on every platform.
// std::mt19937 would also do, but its distributions are not pinned by the
// standard and the report must be byte-stable across toolchains.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() {
        return double(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

private:
    std::uint64_t state_;
};

}  // namespace nullrig
