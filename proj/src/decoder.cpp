#include "betaenc/decoder.hpp"

#include "betaenc/errors.hpp"

#include <cmath>
#include <string>

namespace betaenc {

DecodeMode decode_mode_from_int(int p_L) {
    if (p_L < 0 || p_L > 2) {
        throw precondition_error("decode mode p_L must be 0, 1 or 2, got " + std::to_string(p_L));
    }
    return static_cast<DecodeMode>(p_L);
}

DecoderParams DecoderParams::from(const MapSpec& spec) noexcept {
    return {spec.flavor, spec.beta, spec.s};
}

DecoderParams DecoderParams::with_beta(double b) const noexcept {
    DecoderParams p = *this;
    p.beta = b;
    return p;
}

double DecoderParams::initial_width() const noexcept {
    switch (flavor) {
    case Flavor::bernoulli: return 1.0;
    case Flavor::cautious: return 1.0 / (beta - 1.0);
    case Flavor::scale_adjusted:
    case Flavor::negative_beta: return s;
    }
    return 1.0;
}

namespace {

double branch_offset(const DecoderParams& p) noexcept {
    return p.flavor == Flavor::scale_adjusted ? p.s * (p.beta - 1.0) : 1.0;
}

} // namespace

std::vector<IntervalState> track_intervals(std::span<const std::uint8_t> bits,
                                           const DecoderParams& params) {
    const double g = params.gamma();
    const double w0 = params.initial_width();

    std::vector<IntervalState> out;
    out.reserve(bits.size() + 1);
    IntervalState st{0, 0.0, w0, w0, params.flavor};
    out.push_back(st);

    if (params.flavor != Flavor::negative_beta) {
        const double off = branch_offset(params);
        double power = 1.0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            power *= g;
            st.stage = i + 1;
            if (bits[i]) st.lo += off * power;
            st.width *= g;
            st.hi = st.lo + st.width;
            out.push_back(st);
        }
        return out;
    }

    const double s = params.s;
    double power = 1.0; // (-gamma)^i
    double acc = 0.0;   // A_i
    for (std::size_t i = 0; i < bits.size(); ++i) {
        power *= -g;
        acc -= s * (1.0 + bits[i] * (params.beta - 1.0)) * power;
        st.stage = i + 1;
        st.width *= g;
        st.lo = (st.stage % 2 == 0) ? acc : acc - st.width;
        st.hi = st.lo + st.width;
        out.push_back(st);
    }
    return out;
}

std::vector<IntervalState> track_intervals(const BitRecord& record) {
    return track_intervals(record.bits, DecoderParams::from(record.spec));
}

double decode(std::span<const std::uint8_t> bits, const DecoderParams& params, DecodeMode mode) {
    const double g = params.gamma();
    double lo = 0.0;
    double width = params.initial_width();

    if (params.flavor != Flavor::negative_beta) {
        const double off = branch_offset(params);
        double power = 1.0;
        double sum = 0.0;
        for (std::uint8_t b : bits) {
            power *= g;
            if (b) sum += power;
        }
        lo = off * sum;
        width *= power;
    } else {
        double power = 1.0;
        double sum = 0.0;
        for (std::uint8_t b : bits) {
            power *= -g;
            sum += (1.0 + b * (params.beta - 1.0)) * power;
        }
        if (mode == DecodeMode::midpoint) {
            return params.s * (power / 2.0 - sum);
        }
        width *= std::abs(power);
        lo = -params.s * sum;
        if (bits.size() % 2 == 1) lo -= width;
    }

    switch (mode) {
    case DecodeMode::left: return lo;
    case DecodeMode::midpoint: return lo + width / 2.0;
    case DecodeMode::right: return lo + width;
    }
    return lo;
}

double decode(const BitRecord& record, DecodeMode mode) {
    return decode(record.bits, DecoderParams::from(record.spec), mode);
}

double error_bound(const DecoderParams& params, std::size_t L, DecodeMode mode) {
    const double factor = (1.0 + std::abs(to_int(mode) - 1)) / 2.0;
    return factor * params.initial_width() * std::pow(params.gamma(), static_cast<double>(L));
}

double error_bound(const MapSpec& spec, std::size_t L, DecodeMode mode) {
    return error_bound(DecoderParams::from(spec), L, mode);
}

} // namespace betaenc
