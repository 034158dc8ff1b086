#pragma once

#include "betaenc/encoder.hpp"
#include "betaenc/maps.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace betaenc {

// Representative of the final bracket: left endpoint, midpoint, right endpoint.
enum class DecodeMode : int { left = 0, midpoint = 1, right = 2 };

DecodeMode decode_mode_from_int(int p_L);

inline int to_int(DecodeMode m) noexcept { return static_cast<int>(m); }

// What the decoder needs to know about the encoder.  The threshold is not part of it.
struct DecoderParams {
    Flavor flavor = Flavor::cautious;
    double beta = 1.5;
    double s = 2.0; // scale for scale_adjusted / negative_beta

    static DecoderParams from(const MapSpec& spec) noexcept;

    // Same params decoded with another amplification factor (e.g. an estimate).
    DecoderParams with_beta(double b) const noexcept;

    double gamma() const noexcept { return 1.0 / beta; }
    double initial_width() const noexcept;
};

struct IntervalState {
    std::size_t stage = 0;
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0; // hi - lo, propagated as width_0 * gamma^i
    Flavor flavor = Flavor::cautious;

    bool contains(double x, double slack = 0.0) const noexcept {
        return lo - slack <= x && x < hi + slack;
    }
};

// Brackets I_0..I_L.  Ordinary flavors: l_i = l_{i-1} + offset * b_i gamma^i.
// Negative flavor: x sits between A_i and A_i + s(-gamma)^i with
// A_i = -s sum_{j<=i} f_j (-gamma)^j, so the lower end alternates by parity.
std::vector<IntervalState> track_intervals(std::span<const std::uint8_t> bits,
                                           const DecoderParams& params);
std::vector<IntervalState> track_intervals(const BitRecord& record);

double decode(std::span<const std::uint8_t> bits, const DecoderParams& params, DecodeMode mode);
double decode(const BitRecord& record, DecodeMode mode);

// Worst-case |x - decode| for an L-bit record: ((1 + |p_L - 1|)/2) * width_0 * gamma^L.
double error_bound(const DecoderParams& params, std::size_t L, DecodeMode mode);
double error_bound(const MapSpec& spec, std::size_t L, DecodeMode mode);

} // namespace betaenc
