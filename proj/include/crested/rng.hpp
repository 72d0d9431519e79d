#pragma once

#include <cstdint>
#include <random>

namespace crested {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-stream generator: stream k of a master seed is an mt19937_64 engine
/// seeded with splitmix64 applied to (seed, k). Streams depend only on
/// (seed, stream), never on thread scheduling.
class StreamRng {
public:
    static constexpr const char* algorithm_id = "mt19937_64+splitmix64-streams";

    StreamRng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        (void)splitmix64(s);
        s ^= 0x6a09e667f3bcc909ULL + stream;
        engine_.seed(splitmix64(s));
    }

    std::uint64_t next() { return engine_(); }

    /// Unbiased draw from {0, ..., bound-1} by rejection.
    int uniform_int(int bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % static_cast<std::uint64_t>(bound));
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<int>(r % static_cast<std::uint64_t>(bound));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace crested
