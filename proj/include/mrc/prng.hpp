#pragma once

#include <cstdint>

namespace mrc {

/// splitmix64 generator. Small state, platform-independent output sequence;
/// every randomized operation in the library derives its draws from one of
/// these so runs are reproducible from a single 64-bit seed.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [0, bound) without modulo bias (rejection sampling).
    uint64_t below(uint64_t bound) {
        const uint64_t limit = -bound % bound; // 2^64 mod bound
        uint64_t x;
        do {
            x = next();
        } while (x < limit);
        return x % bound;
    }

    /// Uniform draw from [1, q-1]: the nonzero elements of GF(q).
    uint64_t nonzero(uint64_t q) { return 1 + below(q - 1); }

  private:
    uint64_t state_;
};

/// Derives an independent stream seed from (seed, salt) pairs so that
/// parallel shards and per-item retries never share a stream.
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL + salt * 0xbf58476d1ce4e5b9ULL));
    g.next();
    return g.next();
}

} // namespace mrc
