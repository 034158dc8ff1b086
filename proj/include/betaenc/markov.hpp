#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace betaenc {

// Row-stochastic 2x2 matrix, p[i][j] = Pr[next = j | current = i].
struct TransitionMatrix2 {
    std::array<std::array<double, 2>, 2> p{};

    double operator()(int i, int j) const noexcept { return p[i][j]; }
    double trace() const noexcept { return p[0][0] + p[1][1]; }
    double lambda2() const noexcept { return trace() - 1.0; }
};

struct ChainCounts {
    std::uint64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;
};

struct Stationary {
    double pi0 = 0.0;
    double pi1 = 0.0;
};

enum class TransitionRegion { lower, middle, upper };

struct AnalyticChain {
    TransitionMatrix2 P;
    Stationary stationary;
    double lambda2 = 0.0;
    TransitionRegion region = TransitionRegion::middle;
    double U = 0.0; // S/T with S = nu(beta-1), T = nu - beta(nu-1)

    // 1 - (U + 1/U)/beta evaluated regardless of region, and whether it
    // disagrees with the region-selected lambda2 (happens for beta below the
    // golden ratio at nu = 1).
    double lambda_middle_formula = 0.0;
    bool region_formula_disagrees = false;
};

// Two-state approximation of the bit process of the cautious map on [nu-1, nu).
// Regions: nu < beta/(beta^2-1), up to beta^2/(beta^2-1), and beyond.
AnalyticChain analytic_transition(double beta, double nu);

struct EmpiricalChain {
    ChainCounts counts;
    TransitionMatrix2 P;
    double lambda2 = 0.0;
};

// Throws chain_error(degenerate) if a state never has a successor.
EmpiricalChain empirical_transition(std::span<const std::uint8_t> bits);

struct ChainSpectrum {
    Stationary stationary;
    double lambda2 = 0.0;
};

// Throws chain_error(reducible) when p01 + p10 == 0.
ChainSpectrum chain_spectrum(const TransitionMatrix2& P);

struct DensityEstimate {
    double x = 0.0;
    double value = 0.0;
    std::size_t n_terms = 0;
};

// Truncated Parry series sum_{x < tau^n(1)} gamma^n for tau(t) = beta t mod 1.
DensityEstimate parry_density(double beta, double x, std::size_t n_terms);

// Piecewise-linear map on (0,1] whose branches carry a 2-state chain.
// J_i = (outer[i], outer[i+1]], split into J_{i,j} of width |J_i| p_ij.  With
// ascending[i] the sub-breakpoints run left to right (inner[i][0] = outer[i]),
// otherwise right to left (inner[i][0] = outer[i+1]).  Each branch maps J_{i,j}
// linearly onto J_j.
struct KalmanMap {
    std::array<double, 3> outer{};
    std::array<std::array<double, 3>, 2> inner{};
    std::array<bool, 2> ascending{true, true};
    TransitionMatrix2 source;

    double width(int i) const noexcept { return outer[i + 1] - outer[i]; }
    double sub_width(int i, int j) const noexcept;
    // Signed slope of the branch on J_{i,j}.
    double slope(int i, int j) const noexcept;
    double operator()(double w) const;
};

KalmanMap kalman_embed(const TransitionMatrix2& P, double d1,
                       std::array<bool, 2> ascending = {true, true});

// The 4x4 lifted matrix over the sub-intervals J_{1,1}, J_{1,2}, J_{2,1}, J_{2,2}.
std::array<std::array<double, 4>, 4> kalman_lifted_matrix(const TransitionMatrix2& P);

struct KalmanCheck {
    std::array<double, 4> spectrum{}; // descending
    std::array<double, 5> charpoly{}; // lambda^4 + c1 lambda^3 + ... + c4, charpoly[0] = 1
    bool matches = false;
};

inline constexpr double kalman_tolerance = 1e-10;

KalmanCheck kalman_verify(const KalmanMap& map);

} // namespace betaenc
