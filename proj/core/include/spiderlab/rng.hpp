#pragma once

#include <cstdint>

namespace spiderlab {

// Fixed in run metadata so results can be reproduced elsewhere.
inline constexpr const char* kRngAlgorithm = "xoshiro256** / splitmix64 seeding";

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stateless 64-bit mixer, used to derive substream seeds.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    return splitmix64_next(s);
}

// xoshiro256** (Blackman/Vigna). Value type, copyable; distinct
// (seed, stream) pairs give practically independent sequences.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = mix64(seed, stream);
        for (auto& w : s_) w = splitmix64_next(sm);
        s_[0] |= 1;  // all-zero state is invalid
    }

    std::uint64_t next_u64() {
        const std::uint64_t s0 = s_[0];
        std::uint64_t s1 = s_[1];
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s1 << 17;
        s_[2] ^= s0;
        s_[3] ^= s1;
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1) with 53 random bits
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, n), unbiased (Lemire with rejection)
    std::uint64_t next_below(std::uint64_t n) {
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // one fair bit, consumed from a buffered 64-bit block
    bool next_bit() {
        if (bit_count_ == 0) {
            bit_block_ = next_u64();
            bit_count_ = 64;
        }
        const bool b = bit_block_ & 1;
        bit_block_ >>= 1;
        --bit_count_;
        return b;
    }

    // drops any partially consumed bit block
    void flush_bits() { bit_count_ = 0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
    std::uint64_t bit_block_ = 0;
    int bit_count_ = 0;
};

// Descriptor of a reproducible stream family. Replications draw
// substreams by index so parallel schedules cannot change results.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

inline Xoshiro256 split_stream(const RngStream& master, std::uint64_t id) {
    return Xoshiro256(master.master_seed, mix64(master.stream_id, id));
}

}  // namespace spiderlab
