#pragma once

#include <cstdint>
#include <cstring>
#include <random>
#include <string_view>

namespace betaenc {

// Seeded generator used everywhere randomness is needed.
//
// The engine is std::mt19937_64 (a twisted generalized feedback shift
// register), whose output sequence is fixed by the C++ standard.  Doubles are
// built from the top 53 bits by hand rather than through
// std::uniform_real_distribution, whose algorithm is implementation defined,
// so CSV output is bit-identical across standard libraries.
class Rng {
public:
    static constexpr std::string_view name = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) noexcept {
    return mix64(seed ^ mix64(value));
}

inline std::uint64_t combine_seed(std::uint64_t seed, double value) noexcept {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &value, sizeof bits);
    return combine_seed(seed, bits);
}

} // namespace betaenc
