#pragma once

#include <cstdint>
#include <limits>

namespace packbench {

/// SplitMix64 (Steele, Lea and Flood 2014; public-domain reference by
/// Vigna). The whole state is one 64-bit word, so any language can
/// reproduce the stream from the seed alone.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

    /// Uniform integer in [lo, hi] by rejection: draws x until
    /// x < 2^64 - (2^64 mod span), returns lo + x mod span.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    (std::numeric_limits<std::uint64_t>::max() % span + 1) % span;
        std::uint64_t x = next();
        while (x > limit) x = next();
        return lo + static_cast<std::int64_t>(x % span);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from a master seed and a tag.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 mix(seed ^ (tag * 0xd1b54a32d192ed03ULL));
    return mix.next();
}

}  // namespace packbench
