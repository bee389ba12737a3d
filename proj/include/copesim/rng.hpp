#pragma once

#include <cstdint>

namespace copesim {

// splitmix64 generator. Small state, fully reproducible across platforms,
// which keeps sweep CSVs byte-identical for a given seed everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Number of successes in `trials` Bernoulli(p) draws. Trial counts here
    // are a few hundred at most, so the direct loop is fine.
    int binomial(int trials, double p) {
        int hits = 0;
        for (int t = 0; t < trials; ++t)
            if (uniform01() < p)
                ++hits;
        return hits;
    }

    // Independent stream for (lane, index), e.g. one per Monte Carlo iteration.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t lane, std::uint64_t index) {
        Rng mix(master ^ (0x9e3779b97f4a7c15ull * (lane + 1)));
        std::uint64_t a = mix.next_u64();
        Rng mix2(a ^ (0xbf58476d1ce4e5b9ull * (index + 1)));
        return mix2.next_u64();
    }

  private:
    std::uint64_t state_;
};

} // namespace copesim
