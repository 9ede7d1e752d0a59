#pragma once

#include <cmath>
#include <cstdint>

namespace alphapred {

// SplitMix64 (Vigna 2015): 64-bit state, equidistributed, splittable.
// Used both as the per-chunk generator and as the mixer deriving substreams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform on (0,1), never exactly 0 or 1, safe under log()
    double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    // standard normal via Box-Muller; the spare value is cached, so draws are
    // a deterministic function of the stream position
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTau * u2);
        have_spare_ = true;
        return r * std::cos(kTau * u2);
    }

private:
    static constexpr double kTau = 6.283185307179586476925286766559;
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Reproducible substream: a pure function of (seed, stream). Any worker that
// owns a given stream index reproduces exactly the same draws.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mixer(seed ^ (0x632BE59BD9B4E019ULL * (stream + 1)));
    const std::uint64_t a = mixer.next();
    const std::uint64_t b = mixer.next();
    return SplitMix64(a ^ (b + 0x9E3779B97F4A7C15ULL));
}

}  // namespace alphapred
