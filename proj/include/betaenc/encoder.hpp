#pragma once

#include "betaenc/maps.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace betaenc {

// Per-stage quantiser thresholds nu_1..nu_L.
struct ThresholdSequence {
    std::vector<double> values;
    double base = 0.0;    // nu*
    double epsilon = 0.0; // fluctuation bound on u_i
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return values.size(); }
};

// values[i] = clip(nu_star * (1 + u_i), band) with u_i ~ U[-epsilon, epsilon]
// drawn from Rng(seed).  Out-of-band draws are clipped, not redrawn.
ThresholdSequence make_threshold_sequence(const Interval& band, double nu_star, double epsilon,
                                          std::size_t length, std::uint64_t seed);

ThresholdSequence constant_thresholds(double nu, std::size_t length);

struct BitRecord {
    std::vector<std::uint8_t> bits;
    double residue = 0.0; // L-fold map image of the sample
    MapSpec spec;
    ThresholdSequence thresholds;

    std::size_t size() const noexcept { return bits.size(); }
};

// L-bit expansion of x; stage i compares the (i-1)-fold image with gamma * nu_i.
BitRecord encode(const MapSpec& spec, double x, const ThresholdSequence& thresholds);

// Fixed threshold spec.nu for every stage.
BitRecord encode(const MapSpec& spec, double x, std::size_t length);

// Encodes x and 1 - x under the same threshold sequence.
std::pair<BitRecord, BitRecord> encode_pair(const MapSpec& spec, double x,
                                            const ThresholdSequence& thresholds);

// Rebuilds the sample from bits and residue through the expansion identity:
//   ordinary  x = offset * sum b_i gamma^i + gamma^L * residue
//   negative  x = (-gamma)^L * residue - s * sum f_i (-gamma)^i,  f_i = 1 + b_i (beta - 1)
double reconstruct(const BitRecord& record);

// Bits of a long orbit from x0 with the fixed threshold spec.nu (no sample-domain
// restriction beyond map_step's).  Used for Markov-chain analysis.
std::vector<std::uint8_t> orbit_bits(const MapSpec& spec, double x0, std::size_t n);

enum class FlakyPolicy { greedy, lazy, random_fair };

// Flaky quantiser Q^f_[nu0,nu1]: 1 <= nu0 < nu1 <= (beta-1)^-1.
struct FlakyBand {
    double nu0 = 1.0;
    double nu1 = 1.0;
    FlakyPolicy policy = FlakyPolicy::greedy;
    std::uint64_t seed = 0;
};

FlakyBand make_flaky_band(double beta, double nu0, double nu1, FlakyPolicy policy,
                          std::uint64_t seed = 0);

// 0 if z <= nu0, 1 if z >= nu1; inside the band the policy decides.  The
// random policy hashes (seed, z) so the result is a pure function.
int flaky_quantise(double z, const FlakyBand& band);

// Cautious encoder driven by the flaky quantiser on the amplifier output
// u_i = beta * C^{i-1}(x).  The returned thresholds record, per stage, a
// threshold inside the band that reproduces the bit (nu0 for 1, nu1 for 0).
BitRecord encode_flaky(const MapSpec& spec, double x, const FlakyBand& band, std::size_t length);

} // namespace betaenc
