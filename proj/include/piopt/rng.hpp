#pragma once

#include <cstdint>

namespace piopt {

// Counter-based generator: u(seed, counter) is a pure function, so sharded
// runs reproduce bit-identically regardless of thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform double in (0,1]: 53 random bits, shifted off zero.
inline double counter_uniform(std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t bits = splitmix64(stream + counter);
    return static_cast<double>((bits >> 11) + 1) * (1.0 / 9007199254740992.0);
}

// Stream key for a shard; shards use disjoint counters within the stream.
inline std::uint64_t shard_stream(std::uint64_t seed, std::uint64_t shard) {
    return splitmix64(seed ^ (0xD1B54A32D192ED03ULL * (shard + 1)));
}

inline constexpr std::uint64_t kMcShardSize = 1u << 16;

}  // namespace piopt
