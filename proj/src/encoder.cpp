#include "betaenc/encoder.hpp"

#include "betaenc/errors.hpp"
#include "betaenc/rng.hpp"

#include <algorithm>
#include <cstring>
#include <string>

namespace betaenc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_thresholds(const MapSpec& spec, const ThresholdSequence& th) {
    if (th.values.empty()) {
        throw precondition_error("threshold sequence must hold at least one value");
    }
    if (spec.flavor == Flavor::bernoulli) {
        return;
    }
    const Interval band = spec.threshold_band();
    for (std::size_t i = 0; i < th.values.size(); ++i) {
        if (!band.contains_closed(th.values[i])) {
            throw precondition_error("threshold nu_" + std::to_string(i + 1) + "=" +
                                     fmt(th.values[i]) + " outside the legal band [" +
                                     fmt(band.lo) + ", " + fmt(band.hi) + "]");
        }
    }
}

} // namespace

ThresholdSequence make_threshold_sequence(const Interval& band, double nu_star, double epsilon,
                                          std::size_t length, std::uint64_t seed) {
    if (!band.contains_closed(nu_star)) {
        throw precondition_error("nu_star=" + fmt(nu_star) + " outside band [" + fmt(band.lo) +
                                 ", " + fmt(band.hi) + "]");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw precondition_error("epsilon must lie in [0, 1), got " + fmt(epsilon));
    }
    ThresholdSequence th;
    th.base = nu_star;
    th.epsilon = epsilon;
    th.seed = seed;
    if (epsilon == 0.0) {
        th.values.assign(length, nu_star);
        return th;
    }
    th.values.resize(length);
    Rng rng(seed);
    for (auto& v : th.values) {
        v = std::clamp(nu_star * (1.0 + rng.uniform(-epsilon, epsilon)), band.lo, band.hi);
    }
    return th;
}

ThresholdSequence constant_thresholds(double nu, std::size_t length) {
    ThresholdSequence th;
    th.base = nu;
    th.values.assign(length, nu);
    return th;
}

BitRecord encode(const MapSpec& spec, double x, const ThresholdSequence& thresholds) {
    check_thresholds(spec, thresholds);
    map_step(spec, x); // domain check on the sample

    BitRecord rec;
    rec.spec = spec;
    rec.thresholds = thresholds;
    rec.bits.reserve(thresholds.size());

    MapSpec stage = spec;
    double t = x;
    for (double nu : thresholds.values) {
        stage.nu = nu;
        const Step st = advance(stage, t);
        rec.bits.push_back(static_cast<std::uint8_t>(st.bit));
        t = st.next;
    }
    rec.residue = t;
    return rec;
}

BitRecord encode(const MapSpec& spec, double x, std::size_t length) {
    return encode(spec, x, constant_thresholds(spec.nu, length));
}

std::pair<BitRecord, BitRecord> encode_pair(const MapSpec& spec, double x,
                                            const ThresholdSequence& thresholds) {
    return {encode(spec, x, thresholds), encode(spec, 1.0 - x, thresholds)};
}

double reconstruct(const BitRecord& record) {
    const MapSpec& spec = record.spec;
    const double g = spec.gamma;
    if (spec.flavor == Flavor::negative_beta) {
        double power = 1.0; // (-gamma)^i
        double sum = 0.0;
        for (std::uint8_t b : record.bits) {
            power *= -g;
            sum += (1.0 + b * (spec.beta - 1.0)) * power;
        }
        return power * record.residue - spec.s * sum;
    }
    double power = 1.0;
    double sum = 0.0;
    for (std::uint8_t b : record.bits) {
        power *= g;
        if (b) sum += power;
    }
    return spec.offset() * sum + power * record.residue;
}

std::vector<std::uint8_t> orbit_bits(const MapSpec& spec, double x0, std::size_t n) {
    map_step(spec, x0);
    std::vector<std::uint8_t> bits;
    bits.reserve(n);
    double t = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const Step st = advance(spec, t);
        bits.push_back(static_cast<std::uint8_t>(st.bit));
        t = st.next;
    }
    return bits;
}

FlakyBand make_flaky_band(double beta, double nu0, double nu1, FlakyPolicy policy,
                          std::uint64_t seed) {
    const double top = 1.0 / (beta - 1.0);
    if (!(beta > 1.0 && beta < 2.0)) {
        throw precondition_error("beta must lie in (1, 2), got " + fmt(beta));
    }
    if (!(1.0 <= nu0 && nu0 < nu1 && nu1 <= top)) {
        throw precondition_error("flaky band needs 1 <= nu0 < nu1 <= (beta-1)^-1, got [" +
                                 fmt(nu0) + ", " + fmt(nu1) + "]");
    }
    return {nu0, nu1, policy, seed};
}

int flaky_quantise(double z, const FlakyBand& band) {
    if (z <= band.nu0) return 0;
    if (z >= band.nu1) return 1;
    switch (band.policy) {
    case FlakyPolicy::greedy: return 1;
    case FlakyPolicy::lazy: return 0;
    case FlakyPolicy::random_fair: {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &z, sizeof bits);
        return static_cast<int>(combine_seed(band.seed, bits) >> 63);
    }
    }
    return 0;
}

BitRecord encode_flaky(const MapSpec& spec, double x, const FlakyBand& band, std::size_t length) {
    if (spec.flavor != Flavor::cautious) {
        throw precondition_error("flaky encoding is defined for the cautious flavor only");
    }
    if (length == 0) {
        throw precondition_error("flaky encoding needs at least one stage");
    }
    map_step(spec, x);

    BitRecord rec;
    rec.spec = spec;
    rec.thresholds.base = spec.nu;
    rec.thresholds.seed = band.seed;
    rec.bits.reserve(length);
    rec.thresholds.values.reserve(length);

    const Interval dom = spec.domain();
    double t = x;
    for (std::size_t i = 0; i < length; ++i) {
        const double u = spec.beta * t;
        const int bit = flaky_quantise(u, band);
        rec.bits.push_back(static_cast<std::uint8_t>(bit));
        rec.thresholds.values.push_back(bit ? band.nu0 : band.nu1);
        t = std::clamp(u - bit, dom.lo, dom.hi);
    }
    rec.residue = t;
    return rec;
}

} // namespace betaenc
