#pragma once

// Reference computations written independently of the library: different
// formulas (partial-sum digit rules, explicit geometry, Laplace determinants,
// long double arithmetic) for the same quantities.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Greedy digits from the partial-sum rule: b_m = 1 iff sum_{i<m} b_i g^i + g^m <= x.
inline std::vector<std::uint8_t> greedy_digits(double beta, double x, std::size_t L) {
    const long double g = 1.0L / beta;
    long double partial = 0.0L, pw = 1.0L;
    std::vector<std::uint8_t> b;
    for (std::size_t m = 1; m <= L; ++m) {
        pw *= g;
        const bool one = partial + pw <= x;
        b.push_back(one);
        if (one) partial += pw;
    }
    return b;
}

// Lazy digits: b_m = 0 iff the tail sum_{i>m} g^i can still reach x.
inline std::vector<std::uint8_t> lazy_digits(double beta, double x, std::size_t L) {
    const long double g = 1.0L / beta;
    long double partial = 0.0L, pw = 1.0L;
    std::vector<std::uint8_t> b;
    for (std::size_t m = 1; m <= L; ++m) {
        pw *= g;
        const long double tail = pw * g / (1.0L - g);
        const bool one = x - partial >= tail;
        b.push_back(one);
        if (one) partial += pw;
    }
    return b;
}

// Value of a bit string read in radix -beta with digit weights f_i = 1 + b_i(beta-1).
inline long double negative_value(const std::vector<std::uint8_t>& bits, double beta, double s,
                                  double residue) {
    long double pw = 1.0L, sum = 0.0L;
    for (auto b : bits) {
        pw *= -1.0L / beta;
        sum += (1.0L + b * (beta - 1.0L)) * pw;
    }
    return pw * residue - s * sum;
}

// Ordinary characteristic polynomial in long double, straight from its definition.
inline long double ordinary_poly(const std::vector<int>& d, int p, long double g, bool tail = true) {
    long double v = 1.0L;
    for (std::size_t i = 0; i < d.size(); ++i) v -= d[i] * std::pow(g, static_cast<long double>(i + 1));
    if (tail) v -= p * std::pow(g, static_cast<long double>(d.size() + 1)) / (1.0L - g);
    return v;
}

// Negative polynomial with beta = 1/g substituted literally.
inline long double negative_poly(const std::vector<int>& d, double s, long double g) {
    const long double beta = 1.0L / g;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < d.size(); ++i) {
        sum += (2.0L + d[i] * (beta - 1.0L)) * std::pow(-g, static_cast<long double>(i + 1));
    }
    return s * (std::pow(-g, static_cast<long double>(d.size())) - sum) - 1.0L;
}

// Sign changes of f on a fine grid, each refined by 200 bisection steps.
template <typename F>
std::vector<long double> grid_roots(F f, std::size_t n) {
    std::vector<long double> out;
    long double prev = 1.0L / n, fp = f(prev);
    for (std::size_t k = 2; k < n; ++k) {
        const long double g = static_cast<long double>(k) / n, fg = f(g);
        if ((fg > 0) != (fp > 0)) {
            long double lo = prev, hi = g, flo = fp;
            for (int it = 0; it < 200; ++it) {
                const long double mid = (lo + hi) / 2, fm = f(mid);
                if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; } else hi = mid;
            }
            out.push_back((lo + hi) / 2);
        }
        prev = g;
        fp = fg;
    }
    return out;
}

// Uniform-density transition matrix of the cautious map on J = [nu-1, nu),
// computed from interval overlaps: p_ij = |C(A_i) ∩ A_j| / |A_i| with
// A_0 = [nu-1, c), A_1 = [c, nu), c = nu/beta.
inline std::array<std::array<double, 2>, 2> uniform_transition(double beta, double nu) {
    const double c = nu / beta;
    const double a[2][2] = {{nu - 1.0, c}, {c, nu}};
    const double img[2][2] = {{beta * (nu - 1.0), nu}, {nu - 1.0, beta * nu - 1.0}};
    std::array<std::array<double, 2>, 2> p{};
    for (int i = 0; i < 2; ++i) {
        const double w = img[i][1] - img[i][0];
        for (int j = 0; j < 2; ++j) {
            const double lo = std::max(img[i][0], a[j][0]);
            const double hi = std::min(img[i][1], a[j][1]);
            p[i][j] = std::max(0.0, hi - lo) / w;
        }
    }
    return p;
}

// det(A - lambda I) for 4x4 by cofactor expansion.
inline double det3(const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double det4_shift(const std::array<std::array<double, 4>, 4>& a, double lambda) {
    double m[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = a[i][j] - (i == j ? lambda : 0.0);
    double det = 0.0;
    for (int c = 0; c < 4; ++c) {
        double minor[3][3];
        for (int i = 1; i < 4; ++i) {
            int cc = 0;
            for (int j = 0; j < 4; ++j) {
                if (j == c) continue;
                minor[i - 1][cc++] = m[i][j];
            }
        }
        det += ((c % 2) ? -1.0 : 1.0) * m[0][c] * det3(minor);
    }
    return det;
}

} // namespace oracle
