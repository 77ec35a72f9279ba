#ifndef DIACRIT_RNG_HPP
#define DIACRIT_RNG_HPP

#include <cstdint>

namespace diacrit {

/// splitmix64: tiny, fast, and good enough for resampling and fixtures.
/// Substreams indexed off one master seed are mutually independent, which is
/// what keeps parallel bootstrap replicates schedule-invariant.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n).
    uint64_t below(uint64_t n) { return next() % n; }

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent generator for the index-th substream of a master seed.
    static SplitMix64 substream(uint64_t seed, uint64_t index) {
        SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        return SplitMix64(mixer.next());
    }

private:
    uint64_t state_;
};

}  // namespace diacrit

#endif  // DIACRIT_RNG_HPP
