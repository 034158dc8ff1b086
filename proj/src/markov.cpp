#include "betaenc/markov.hpp"

#include "betaenc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

namespace betaenc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TransitionMatrix2 matrix(double p00, double p01, double p10, double p11) {
    TransitionMatrix2 m;
    m.p = {{{p00, p01}, {p10, p11}}};
    return m;
}

using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 mul(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// Faddeev-LeVerrier: coefficients of det(lambda I - A), leading 1.
std::array<double, 5> charpoly(const Mat4& a) {
    std::array<double, 5> c{};
    c[0] = 1.0;
    Mat4 m{};
    for (int k = 1; k <= 4; ++k) {
        Mat4 next = mul(a, m);
        for (int i = 0; i < 4; ++i) next[i][i] += c[k - 1];
        m = next;
        const Mat4 am = mul(a, m);
        double tr = 0.0;
        for (int i = 0; i < 4; ++i) tr += am[i][i];
        c[k] = -tr / k;
    }
    return c;
}

// Durand-Kerner on a monic quartic; only reached when the coefficients do not
// split off a double zero.
std::array<std::complex<double>, 4> quartic_roots(const std::array<double, 5>& c) {
    using cd = std::complex<double>;
    auto eval = [&](cd z) { return (((z + c[1]) * z + c[2]) * z + c[3]) * z + c[4]; };
    std::array<cd, 4> r;
    const cd seed(0.4, 0.9);
    r[0] = 1.0;
    for (int k = 1; k < 4; ++k) r[k] = r[k - 1] * seed;
    for (int it = 0; it < 500; ++it) {
        for (int i = 0; i < 4; ++i) {
            cd denom = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i) denom *= r[i] - r[j];
            r[i] -= eval(r[i]) / denom;
        }
    }
    return r;
}

} // namespace

AnalyticChain analytic_transition(double beta, double nu) {
    if (!(beta > 1.0 && beta < 2.0)) {
        throw precondition_error("beta must lie in (1, 2), got " + fmt(beta));
    }
    const double top = 1.0 / (beta - 1.0);
    if (!(nu >= 1.0 && nu <= top)) {
        throw precondition_error("nu=" + fmt(nu) + " outside [1, " + fmt(top) + "]");
    }
    const double S = nu * (beta - 1.0);
    const double T = nu - beta * (nu - 1.0);
    const double U = S / T;
    const double b2 = beta * beta;
    const double lower = beta / (b2 - 1.0);
    const double upper = b2 / (b2 - 1.0);

    AnalyticChain a;
    a.U = U;
    if (nu < lower) {
        a.region = TransitionRegion::lower;
        a.P = matrix(1.0 - U / beta, U / beta, 1.0, 0.0);
        a.stationary = {beta * T / (S + beta * T), S / (S + beta * T)};
        a.lambda2 = -U / beta;
    } else if (nu < upper) {
        a.region = TransitionRegion::middle;
        a.P = matrix(1.0 - U / beta, U / beta, 1.0 / (beta * U), 1.0 - 1.0 / (beta * U));
        a.stationary = {T * T / (S * S + T * T), S * S / (S * S + T * T)};
        a.lambda2 = 1.0 - (U + 1.0 / U) / beta;
    } else {
        a.region = TransitionRegion::upper;
        a.P = matrix(0.0, 1.0, 1.0 / (beta * U), 1.0 - 1.0 / (beta * U));
        a.stationary = {T / (T + beta * S), beta * S / (T + beta * S)};
        a.lambda2 = -1.0 / (beta * U);
    }
    a.lambda_middle_formula = 1.0 - (U + 1.0 / U) / beta;
    a.region_formula_disagrees = std::abs(a.lambda_middle_formula - a.lambda2) > 1e-12;
    return a;
}

EmpiricalChain empirical_transition(std::span<const std::uint8_t> bits) {
    if (bits.size() < 2) {
        throw precondition_error("empirical chain needs at least 2 bits");
    }
    EmpiricalChain e;
    for (std::size_t i = 1; i < bits.size(); ++i) {
        const int a = bits[i - 1] ? 1 : 0;
        const int b = bits[i] ? 1 : 0;
        if (a == 0) (b ? e.counts.n01 : e.counts.n00)++;
        else (b ? e.counts.n11 : e.counts.n10)++;
    }
    const double r0 = static_cast<double>(e.counts.n00 + e.counts.n01);
    const double r1 = static_cast<double>(e.counts.n10 + e.counts.n11);
    if (r0 == 0.0 || r1 == 0.0) {
        throw chain_error(chain_error::kind::degenerate,
                          std::string("degenerate chain: state ") + (r0 == 0.0 ? "0" : "1") +
                              " unvisited");
    }
    e.P = matrix(e.counts.n00 / r0, e.counts.n01 / r0, e.counts.n10 / r1, e.counts.n11 / r1);
    e.lambda2 = e.P.lambda2();
    return e;
}

ChainSpectrum chain_spectrum(const TransitionMatrix2& P) {
    for (const auto& row : P.p) {
        if (row[0] < 0.0 || row[1] < 0.0 || std::abs(row[0] + row[1] - 1.0) > 1e-12) {
            throw precondition_error("matrix is not row-stochastic");
        }
    }
    const double flow = P(0, 1) + P(1, 0);
    if (flow == 0.0) {
        throw chain_error(chain_error::kind::reducible,
                          "reducible chain: stationary distribution is not unique");
    }
    return {{P(1, 0) / flow, P(0, 1) / flow}, P.lambda2()};
}

DensityEstimate parry_density(double beta, double x, std::size_t n_terms) {
    if (!(beta > 1.0)) {
        throw precondition_error("beta must exceed 1, got " + fmt(beta));
    }
    if (!(x >= 0.0 && x < 1.0)) {
        throw precondition_error("density abscissa must lie in [0, 1), got " + fmt(x));
    }
    const double g = 1.0 / beta;
    DensityEstimate d{x, 1.0, n_terms};
    double t = 1.0;
    double power = 1.0;
    for (std::size_t n = 1; n <= n_terms; ++n) {
        double u = beta * t;
        const double r = std::round(u);
        if (std::abs(u - r) < 1e-12 * std::max(1.0, u)) u = r;
        t = u - std::floor(u);
        power *= g;
        if (x < t) d.value += power;
    }
    return d;
}

double KalmanMap::sub_width(int i, int j) const noexcept {
    return std::abs(inner[i][j + 1] - inner[i][j]);
}

double KalmanMap::slope(int i, int j) const noexcept {
    const double m = width(j) / sub_width(i, j);
    return ascending[i] ? m : -m;
}

double KalmanMap::operator()(double w) const {
    if (!(w > 0.0 && w <= 1.0)) {
        throw precondition_error("Kalman map is defined on (0, 1], got " + fmt(w));
    }
    const int i = w <= outer[1] ? 0 : 1;
    int j = 0;
    if (ascending[i]) {
        j = w <= inner[i][1] ? 0 : 1;
    } else {
        j = w > inner[i][1] ? 0 : 1;
    }
    const double dj_prev = outer[j];
    const double dj = outer[j + 1];
    const double dij_prev = inner[i][j];
    const double dij = inner[i][j + 1];
    const double wij = sub_width(i, j);
    if (ascending[i]) {
        return (width(j) * w + dij * dj_prev - dij_prev * dj) / wij;
    }
    return (-width(j) * w + dij_prev * dj - dij * dj_prev) / wij;
}

KalmanMap kalman_embed(const TransitionMatrix2& P, double d1, std::array<bool, 2> ascending) {
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (!(P(i, j) > 0.0 && P(i, j) < 1.0)) {
                throw precondition_error("Kalman embedding needs 0 < p_ij < 1 for all i, j; p" +
                                         std::to_string(i) + std::to_string(j) + "=" +
                                         fmt(P(i, j)));
            }
        }
        if (std::abs(P(i, 0) + P(i, 1) - 1.0) > 1e-12) {
            throw precondition_error("row " + std::to_string(i) + " does not sum to 1");
        }
    }
    if (!(d1 > 0.0 && d1 < 1.0)) {
        throw precondition_error("breakpoint d1 must lie in (0, 1), got " + fmt(d1));
    }
    KalmanMap k;
    k.source = P;
    k.ascending = ascending;
    k.outer = {0.0, d1, 1.0};
    for (int i = 0; i < 2; ++i) {
        const double w = k.width(i);
        if (ascending[i]) {
            k.inner[i] = {k.outer[i], k.outer[i] + w * P(i, 0), k.outer[i + 1]};
        } else {
            k.inner[i] = {k.outer[i + 1], k.outer[i + 1] - w * P(i, 0), k.outer[i]};
        }
    }
    return k;
}

std::array<std::array<double, 4>, 4> kalman_lifted_matrix(const TransitionMatrix2& P) {
    Mat4 m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) m[2 * i + j][2 * j + k] = P(j, k);
    return m;
}

KalmanCheck kalman_verify(const KalmanMap& map) {
    KalmanCheck out;
    out.charpoly = charpoly(kalman_lifted_matrix(map.source));
    const auto& c = out.charpoly;

    bool real = true;
    if (std::abs(c[3]) <= 1e-13 && std::abs(c[4]) <= 1e-13) {
        const double disc = c[1] * c[1] - 4.0 * c[2];
        if (disc < 0.0) {
            real = false;
            out.spectrum = {-c[1] / 2.0, -c[1] / 2.0, 0.0, 0.0};
        } else {
            const double r = std::sqrt(disc);
            out.spectrum = {(-c[1] + r) / 2.0, (-c[1] - r) / 2.0, 0.0, 0.0};
        }
    } else {
        const auto roots = quartic_roots(c);
        for (int i = 0; i < 4; ++i) {
            out.spectrum[i] = roots[i].real();
            if (std::abs(roots[i].imag()) > kalman_tolerance) real = false;
        }
    }
    std::sort(out.spectrum.begin(), out.spectrum.end(), std::greater<>());

    std::array<double, 4> expected{1.0, map.source.lambda2(), 0.0, 0.0};
    std::sort(expected.begin(), expected.end(), std::greater<>());
    out.matches = real;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(out.spectrum[i] - expected[i]) > kalman_tolerance) out.matches = false;
    }
    return out;
}

} // namespace betaenc
