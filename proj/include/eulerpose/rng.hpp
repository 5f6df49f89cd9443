#pragma once

#include <cstdint>
#include <random>

namespace eulerpose {

/// Seeded random source with fully specified output.
///
/// The engine is std::mt19937_64, whose sequence the standard fixes. The
/// standard distributions are implementation-defined, so the transforms
/// are spelled out here instead:
///   uniform01  = (next() >> 11) * 2^-53, in [0, 1)
///   normal     = Box-Muller on (u1, u2): sqrt(-2 ln(1 - u1)) * cos(2 pi u2);
///                one engine pair per sample, the sine branch is discarded
///   below(n)   = next() % n with rejection of the biased top range
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double normal();
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

} // namespace eulerpose
