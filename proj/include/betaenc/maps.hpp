#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace betaenc {

enum class Flavor { bernoulli, cautious, scale_adjusted, negative_beta };

std::string_view to_string(Flavor f) noexcept;
Flavor parse_flavor(std::string_view name);

// Half-open [lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return lo <= x && x < hi; }
    bool contains_closed(double x) const noexcept { return lo <= x && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

// One of the four interval-map flavors.
//
//   bernoulli       B_rho(x)      = 2x or 2x - 1, cut at (1 + rho)/2   (beta = 2, nu = 1 + rho)
//   cautious        C_{beta,nu}   = beta x or beta x - 1, cut at gamma nu
//   scale_adjusted  S_{beta,nu,s} = beta x or beta x - s(beta - 1), cut at gamma nu
//   negative_beta   R_{beta,nu,s} = s - beta x or beta s - beta x, cut at gamma nu
//
// Every flavor cuts at gamma * nu, so the Bernoulli shift is stored with
// nu = 1 + rho.  Use the named constructors; they enforce the parameter ranges.
struct MapSpec {
    Flavor flavor = Flavor::cautious;
    double beta = 1.5;
    double gamma = 1.0 / 1.5;
    double nu = 1.0;
    double s = 1.0;
    double rho = 0.0;

    static MapSpec bernoulli(double rho = 0.0);
    static MapSpec cautious(double beta, double nu);
    static MapSpec greedy(double beta);
    static MapSpec lazy(double beta);
    static MapSpec scale_adjusted(double beta, double nu, double s);
    static MapSpec negative_beta(double beta, double nu, double s);

    // Same map with another threshold; validated against threshold_band().
    MapSpec with_nu(double nu) const;

    // Point of discontinuity c = gamma * nu.
    double cut() const noexcept { return gamma * nu; }

    // Amount subtracted on the upper branch of the ordinary flavors.
    double offset() const noexcept;

    // Closed set of legal samples: [0,1) Bernoulli, [0,(beta-1)^-1] cautious, [0,s] otherwise.
    Interval domain() const noexcept;

    // Legal thresholds: [1,(beta-1)^-1] cautious, [s(beta-1), s] scale-adjusted/negative.
    Interval threshold_band() const noexcept;

    // Width of the initial decoding interval I_0.
    double initial_width() const noexcept;

    bool is_ordinary() const noexcept { return flavor != Flavor::negative_beta; }
};

struct Step {
    double next = 0.0;
    int bit = 0;
};

// One map application without domain checks.  Used by the encoder hot loop
// after the initial sample has been validated.
Step advance(const MapSpec& spec, double x) noexcept;

// One map application.  Throws precondition_error when x is outside domain().
Step map_step(const MapSpec& spec, double x);

enum class Symbol : char { zero = '0', one = '1', star = '*' };

struct Orbit {
    std::vector<double> states;
    std::vector<Symbol> symbols;

    bool truncated() const noexcept { return !symbols.empty() && symbols.back() == Symbol::star; }
};

// Addresses of the forward orbit relative to the cut; stops at the first exact hit with '*'.
Orbit itinerary(const MapSpec& spec, double x, std::size_t n);

Interval invariant_subinterval(const MapSpec& spec);

inline constexpr std::size_t default_visit_budget = 1'000'000;

// Smallest M with tau^M(x) in invariant_subinterval(spec).
std::size_t first_visit_time(const MapSpec& spec, double x,
                             std::size_t max_iter = default_visit_budget);

// Greedy/lazy duality involution psi(x) = (beta-1)^-1 - x.
double psi(double beta, double x);

} // namespace betaenc
