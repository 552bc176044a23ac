#pragma once

#include <cstdint>
#include <string_view>

namespace dmcis {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bit-exact on every platform.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// FNV-1a, used to fold strings into seeds.
constexpr std::uint64_t fnv1a64(std::string_view s)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b)
{
    return mix64(a + kGoldenGamma * (b + 1));
}

// Stream for one actor: independent of how many other actors exist.
constexpr std::uint64_t derive_seed(std::uint64_t master, int role, int id)
{
    auto tag = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(role)) << 32)
               | static_cast<std::uint32_t>(id);
    return combine_seed(master, tag);
}

// SplitMix64 stream: state += golden gamma, output = mix64(state).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64()
    {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller; consumes two uniforms per call.
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace dmcis
