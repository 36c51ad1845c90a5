#ifndef ROLLER_RNG_HPP
#define ROLLER_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

#include "roller/vec3.hpp"

namespace roller {

// Counter-based deterministic RNG built on SplitMix64. All randomness in
// the project flows from one master seed through derive(); the sequence
// for a given (seed, stream, index) is identical on every platform,
// which is what makes trajectory and report files byte-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Stable stream split: hash the parent seed with a stream tag and an
    // index. Used per (episode, purpose) so parallel fan-out cannot
    // reorder draws.
    static Rng derive(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0) {
        std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the tag
        for (char c : stream) {
            h ^= static_cast<std::uint8_t>(c);
            h *= 0x00000100000001b3ull;
        }
        Rng r(mix(seed ^ mix(h)) ^ mix(index * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull));
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    // Box-Muller, cosine branch only; two uniforms per draw. Slower than
    // caching the sine branch but keeps the draw count a pure function
    // of the call count.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(kTwoPi * u2);
    }

    // Uniform direction on the unit sphere.
    Vec3 unit_vector() {
        double z = uniform(-1.0, 1.0);
        double phi = uniform(0.0, kTwoPi);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

    // Bernoulli(p).
    bool chance(double p) { return uniform() < p; }

    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

private:
    static constexpr double kTwoPi = 6.28318530717958647692;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace roller

#endif  // ROLLER_RNG_HPP
