#include "betaenc/estimation.hpp"

#include "betaenc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace betaenc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Coefficients c_0..c_L of the negative polynomial, P(g) = sum c_k g^k.
// (2 + d(1/g - 1)) (-g)^i = (2 - d)(-1)^i g^i + d (-1)^i g^{i-1}
std::vector<double> negative_coefficients(const CharPoly& poly) {
    const std::size_t L = poly.d.size();
    std::vector<double> c(L + 1, 0.0);
    const double s = poly.s;
    c[0] = -1.0;
    c[L] += s * ((L % 2 == 0) ? 1.0 : -1.0);
    for (std::size_t i = 1; i <= L; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const int d = poly.d[i - 1];
        c[i] -= s * (2 - d) * sign;
        c[i - 1] -= s * d * sign;
    }
    return c;
}

double horner(const std::vector<double>& c, double g) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * g + c[k];
    return acc;
}

void require_gamma(double g) {
    if (!(g >= 0.0 && g < 1.0)) {
        throw precondition_error("gamma must lie in [0, 1), got " + fmt(g));
    }
}

BetaEstimate finish(double lo, double hi, double residual) {
    BetaEstimate e;
    e.gamma_hat = 0.5 * (lo + hi);
    e.beta_hat = 1.0 / e.gamma_hat;
    e.residual = residual;
    e.bracket_width = hi - lo;
    return e;
}

} // namespace

CharPoly make_char_poly(std::span<const std::uint8_t> bits_x, std::span<const std::uint8_t> bits_y,
                        int tail_mode, PolyFlavor flavor, double s) {
    if (bits_x.size() != bits_y.size()) {
        throw precondition_error("paired records differ in length: " +
                                 std::to_string(bits_x.size()) + " vs " +
                                 std::to_string(bits_y.size()));
    }
    decode_mode_from_int(tail_mode);
    CharPoly poly;
    poly.tail_mode = tail_mode;
    poly.flavor = flavor;
    poly.s = s;
    poly.d.resize(bits_x.size());
    for (std::size_t i = 0; i < bits_x.size(); ++i) {
        poly.d[i] = bits_x[i] + bits_y[i];
    }
    return poly;
}

double char_poly_eval(const CharPoly& poly, double gamma) {
    require_gamma(gamma);
    if (poly.flavor == PolyFlavor::negative) {
        return horner(negative_coefficients(poly), gamma);
    }
    double power = 1.0;
    double sum = 0.0;
    for (int d : poly.d) {
        power *= gamma;
        sum += d * power;
    }
    double p = 1.0 - sum;
    if (poly.flavor == PolyFlavor::ordinary && poly.tail_mode != 0) {
        p -= poly.tail_mode * power * gamma / (1.0 - gamma);
    }
    return p;
}

BetaEstimate solve_char_poly(const CharPoly& poly) {
    if (poly.flavor == PolyFlavor::negative) {
        throw precondition_error("solve_char_poly handles ordinary and legacy polynomials only");
    }
    const bool all_zero = std::all_of(poly.d.begin(), poly.d.end(), [](int d) { return d == 0; });
    const bool all_two = std::all_of(poly.d.begin(), poly.d.end(), [](int d) { return d == 2; });
    if (all_zero || all_two) {
        throw estimation_error(estimation_error::kind::degenerate,
                               std::string("no root: degenerate digit sequence (all d_i = ") +
                                   (all_zero ? "0" : "2") + ")");
    }
    double lo = solver_lo;
    double hi = solver_hi;
    double plo = char_poly_eval(poly, lo);
    const double phi = char_poly_eval(poly, hi);
    if (plo == 0.0) return finish(lo, lo, 0.0);
    if (phi == 0.0) return finish(hi, hi, 0.0);
    if ((plo > 0.0) == (phi > 0.0)) {
        throw estimation_error(estimation_error::kind::no_root,
                               "no root: P has no sign change on [" + fmt(lo) + ", " + fmt(hi) +
                                   "]");
    }
    for (int it = 0; it < solver_max_iter && hi - lo >= solver_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pm = char_poly_eval(poly, mid);
        if (pm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((pm > 0.0) == (plo > 0.0)) {
            lo = mid;
            plo = pm;
        } else {
            hi = mid;
        }
    }
    const double g = 0.5 * (lo + hi);
    return finish(lo, hi, std::abs(char_poly_eval(poly, g)));
}

BetaEstimate estimate_beta(std::span<const std::uint8_t> bits_x,
                           std::span<const std::uint8_t> bits_y, DecodeMode mode) {
    return solve_char_poly(make_char_poly(bits_x, bits_y, to_int(mode), PolyFlavor::ordinary));
}

BetaEstimate estimate_beta(const BitRecord& bits_x, const BitRecord& bits_y, DecodeMode mode) {
    if (!bits_x.spec.is_ordinary() || !bits_y.spec.is_ordinary()) {
        throw precondition_error("estimate_beta needs ordinary-flavor records");
    }
    return estimate_beta(bits_x.bits, bits_y.bits, mode);
}

std::vector<BetaEstimate> find_roots_on_grid(const CharPoly& poly, std::size_t grid) {
    if (grid < 2) {
        throw precondition_error("root grid needs at least 2 points");
    }
    std::vector<double> coeffs;
    if (poly.flavor == PolyFlavor::negative) coeffs = negative_coefficients(poly);
    auto eval = [&](double g) {
        return poly.flavor == PolyFlavor::negative ? horner(coeffs, g) : char_poly_eval(poly, g);
    };

    std::vector<BetaEstimate> roots;
    const double step = 1.0 / static_cast<double>(grid);
    double prev_g = step;
    double prev_p = eval(prev_g);
    if (prev_p == 0.0) roots.push_back(finish(prev_g, prev_g, 0.0));
    for (std::size_t k = 2; k < grid; ++k) {
        const double g = static_cast<double>(k) * step;
        const double p = eval(g);
        if (p == 0.0) {
            roots.push_back(finish(g, g, 0.0));
        } else if (prev_p != 0.0 && (p > 0.0) != (prev_p > 0.0)) {
            double lo = prev_g;
            double hi = g;
            double plo = prev_p;
            for (;;) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double pm = eval(mid);
                if (pm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((pm > 0.0) == (plo > 0.0)) {
                    lo = mid;
                    plo = pm;
                } else {
                    hi = mid;
                }
            }
            const double r = 0.5 * (lo + hi);
            roots.push_back(finish(lo, hi, std::abs(eval(r))));
        }
        prev_g = g;
        prev_p = p;
    }
    return roots;
}

std::vector<BetaEstimate> estimate_beta_negative(std::span<const std::uint8_t> bits_x,
                                                 std::span<const std::uint8_t> bits_y, double s,
                                                 std::size_t grid) {
    return find_roots_on_grid(make_char_poly(bits_x, bits_y, 1, PolyFlavor::negative, s), grid);
}

std::vector<BetaEstimate> estimate_beta_negative(const BitRecord& bits_x, const BitRecord& bits_y,
                                                 std::size_t grid) {
    if (bits_x.spec.flavor != Flavor::negative_beta || bits_y.spec.flavor != Flavor::negative_beta) {
        throw precondition_error("estimate_beta_negative needs negative-flavor records");
    }
    if (bits_x.spec.s != bits_y.spec.s) {
        throw precondition_error("paired records use different scales");
    }
    return estimate_beta_negative(bits_x.bits, bits_y.bits, bits_x.spec.s, grid);
}

double estimate_nu(std::span<const std::uint8_t> bits, double beta) {
    if (!(beta > 1.0)) {
        throw precondition_error("beta must exceed 1, got " + fmt(beta));
    }
    const double g = 1.0 / beta;
    double power = 1.0;
    double sum = 0.0;
    for (std::uint8_t b : bits) {
        power *= g;
        if (!b) sum += power;
    }
    return sum + power / (beta - 1.0) / 2.0;
}

double estimate_nu(const BitRecord& bits, double beta) {
    if (!bits.spec.is_ordinary()) {
        throw precondition_error("estimate_nu needs an ordinary-flavor record");
    }
    return estimate_nu(bits.bits, beta);
}

DesignSpec optimal_beta(std::size_t L, double sigma) {
    if (L < 1) {
        throw precondition_error("bit budget L must be at least 1");
    }
    if (!(sigma > 0.0)) {
        throw precondition_error("tolerance sigma must be positive, got " + fmt(sigma));
    }
    DesignSpec d;
    d.L = L;
    d.sigma = sigma;
    const double l = static_cast<double>(L);
    d.beta_opt = 2.0 * l / (l + 1.0);
    d.s_opt = sigma * (l + 1.0) / 2.0;
    d.scale_exceeds_unit = d.s_opt > 1.0;
    d.unit_scale_beta = 2.0 - 1.0 / sigma;
    return d;
}

double scan_design_beta(std::size_t L, double sigma, double step) {
    if (!(step > 0.0 && step < 1.0)) {
        throw precondition_error("scan step must lie in (0, 1), got " + fmt(step));
    }
    const double l = static_cast<double>(L);
    double best_beta = std::numeric_limits<double>::quiet_NaN();
    double best = std::numeric_limits<double>::infinity();
    const auto n = static_cast<long>(std::floor(1.0 / step));
    for (long k = 1; k < n; ++k) {
        const double beta = 1.0 + static_cast<double>(k) * step;
        if (beta >= 2.0) break;
        // log of sigma/(2-beta) * beta^-L
        const double v = std::log(sigma) - std::log(2.0 - beta) - l * std::log(beta);
        if (v < best) {
            best = v;
            best_beta = beta;
        }
    }
    return best_beta;
}

} // namespace betaenc
