#pragma once

#include <cmath>
#include <cstdint>

namespace switchdiff {

/// Splittable counter-keyed random stream (SplitMix64 core).
///
/// Streams are derived from (root_seed, path_index) only, so batch results
/// do not depend on which worker runs which path or in what order. The
/// uniform/gaussian/exponential transforms are implemented here rather than
/// taken from <random> so that a given stream yields the same draws on every
/// run of the same build.
class PathRng {
public:
    explicit PathRng(std::uint64_t seed) : state_(seed) {}

    /// Seed for one path of a batch: mixes the root seed with the path index
    /// through two SplitMix rounds. Distinct (root, index) pairs give
    /// distinct, well-separated stream states regardless of which worker
    /// runs the path.
    static std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t path_index) {
        std::uint64_t s = mix(root_seed + 0x9E3779B97F4A7C15ULL * (path_index + 1));
        return mix(s ^ root_seed);
    }

    static PathRng for_path(std::uint64_t root_seed, std::uint64_t path_index) {
        return PathRng(derive_seed(root_seed, path_index));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log argument.
    double next_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double next_gaussian() {
        double u = next_open();
        double v = next_double();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
    }

    /// Exponential with the given rate; consumes one uniform.
    double next_exponential(double rate) { return -std::log(next_open()) / rate; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace switchdiff
