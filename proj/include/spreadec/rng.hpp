#pragma once

#include <cstdint>

namespace spreadec {

// Deterministic 64-bit generator (splitmix64). Identical seeds produce
// identical draw sequences on every platform. Child streams for parallel
// shards derive from the original seed only, never from the current state,
// so sharded runs are reproducible regardless of worker count.
class Rng {
  public:
    explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, bound). Rejection sampling keeps it exact.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    uint64_t seed() const { return seed_; }

    // Stream for shard/trial `index`; a pure function of (seed, index).
    Rng split(uint64_t index) const {
        uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return Rng(z ^ (z >> 31));
    }

  private:
    uint64_t seed_;
    uint64_t state_;
};

}  // namespace spreadec
