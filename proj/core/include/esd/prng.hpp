#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace esd {

// Every random choice in this library flows through SplitMix64 so that runs
// are bit-reproducible across platforms and across reimplementations of the
// same algorithm (the std:: distributions are not pinned by the standard).
//
// Reference: Sebastiano Vigna, http://prng.di.unimi.it/splitmix64.c
// Output for state seeded with 0: 0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, ...
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) using the top 53 bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Unbiased integer in [0, bound) by rejection sampling. bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

// One scrambling round of SplitMix64 (no state advance).
inline std::uint64_t splitmix64_scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed, e.g. one seed per
// cross-validation fold or per training epoch:
//
//     mix_seed(master, t) = scramble(master + (t + 1) * 0x9e3779b97f4a7c15)
//
// The +1 keeps stream 0 distinct from the master seed itself.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64_scramble(master + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

// Fisher-Yates, iterating from the back; consumes one next_below per step.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace esd
