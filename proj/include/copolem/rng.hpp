#ifndef COPOLEM_RNG_HPP
#define COPOLEM_RNG_HPP

#include <cstdint>

namespace copolem {

// SplitMix64: tiny, fast, and bit-for-bit reproducible across platforms
// (unlike the distributions in <random>, which the standard leaves
// implementation-defined). Used for all disorder sampling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double()
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool next_bool() { return (next() >> 63) != 0; }

private:
    std::uint64_t state_;
};

// Mix a base seed with a stream index so each disorder sample / field gets an
// independent, order-insensitive stream.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream)
{
    SplitMix64 h(base ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    return h.next();
}

} // namespace copolem

#endif
