#pragma once

#include "betaenc/decoder.hpp"
#include "betaenc/encoder.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace betaenc {

enum class PolyFlavor { ordinary, daubechies_legacy, negative };

// Characteristic polynomial in gamma built from d_i = b_i + c_i, where b and c
// are the bits of x and y = 1 - x.
//   ordinary  P = 1 - sum d_i g^i - p_L g^{L+1} / (1 - g)
//   legacy    P = 1 - sum d_i g^i
//   negative  P = s{(-g)^L - sum (2 + d_i(beta - 1)) (-g)^i} - 1,  beta = 1/g
struct CharPoly {
    std::vector<int> d;
    int tail_mode = 1; // p_L
    PolyFlavor flavor = PolyFlavor::ordinary;
    double s = 1.0;

    std::size_t size() const noexcept { return d.size(); }
};

CharPoly make_char_poly(std::span<const std::uint8_t> bits_x, std::span<const std::uint8_t> bits_y,
                        int tail_mode, PolyFlavor flavor, double s = 1.0);

// Throws precondition_error unless 0 <= gamma < 1.
double char_poly_eval(const CharPoly& poly, double gamma);

struct BetaEstimate {
    double gamma_hat = 0.0;
    double beta_hat = 0.0;
    double residual = 0.0;
    double bracket_width = 0.0;
};

inline constexpr double solver_lo = 1e-6;
inline constexpr double solver_hi = 1.0 - 1e-6;
inline constexpr double solver_tol = 1e-12;
inline constexpr int solver_max_iter = 200;

// Unique root of an ordinary or legacy polynomial on (0, 1) by bisection.
// All-zero or all-two d raises estimation_error(degenerate); no sign change
// raises estimation_error(no_root).
BetaEstimate solve_char_poly(const CharPoly& poly);

BetaEstimate estimate_beta(const BitRecord& bits_x, const BitRecord& bits_y, DecodeMode mode);
BetaEstimate estimate_beta(std::span<const std::uint8_t> bits_x,
                           std::span<const std::uint8_t> bits_y, DecodeMode mode);

inline constexpr std::size_t default_root_grid = 10000;

// Every sign change of P on a uniform grid of (0, 1), refined by bisection; ascending.
std::vector<BetaEstimate> find_roots_on_grid(const CharPoly& poly,
                                             std::size_t grid = default_root_grid);

std::vector<BetaEstimate> estimate_beta_negative(const BitRecord& bits_x, const BitRecord& bits_y,
                                                 std::size_t grid = default_root_grid);
std::vector<BetaEstimate> estimate_beta_negative(std::span<const std::uint8_t> bits_x,
                                                 std::span<const std::uint8_t> bits_y, double s,
                                                 std::size_t grid = default_root_grid);

// Threshold estimate from a fixed-threshold record:
//   nu_hat = sum (1 - b_i) gamma^i + (beta - 1)^-1 gamma^L / 2
double estimate_nu(std::span<const std::uint8_t> bits, double beta);
double estimate_nu(const BitRecord& bits, double beta);

struct DesignSpec {
    std::size_t L = 1;
    double sigma = 1.0;
    double beta_opt = 1.0;
    double s_opt = 1.0;
    // s_opt > 1: pin s = 1 and use beta = 2 - 1/sigma instead.
    bool scale_exceeds_unit = false;
    double unit_scale_beta = 1.0;
};

// Minimiser of s gamma^L subject to s(2 - beta) = sigma.
DesignSpec optimal_beta(std::size_t L, double sigma);

// Brute-force minimiser of sigma/(2 - beta) * beta^-L over beta = 1 + k*step in (1, 2).
double scan_design_beta(std::size_t L, double sigma, double step);

} // namespace betaenc
