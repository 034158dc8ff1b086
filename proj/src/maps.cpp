#include "betaenc/maps.hpp"

#include "betaenc/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace betaenc {

namespace {

constexpr double clamp_slack = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_beta(double beta) {
    if (!(beta > 1.0 && beta < 2.0)) {
        throw precondition_error("beta must lie in (1, 2), got " + fmt(beta));
    }
}

void require_scale(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw precondition_error("scale s must be positive, got " + fmt(s));
    }
}

void require_nu_in(const Interval& band, double nu) {
    if (!band.contains_closed(nu)) {
        throw precondition_error("threshold nu=" + fmt(nu) + " outside [" + fmt(band.lo) + ", " +
                                 fmt(band.hi) + "]");
    }
}

MapSpec make(Flavor f, double beta, double nu, double s, double rho) {
    MapSpec m;
    m.flavor = f;
    m.beta = beta;
    m.gamma = 1.0 / beta;
    m.nu = nu;
    m.s = s;
    m.rho = rho;
    return m;
}

} // namespace

std::string_view to_string(Flavor f) noexcept {
    switch (f) {
    case Flavor::bernoulli: return "bernoulli";
    case Flavor::cautious: return "cautious";
    case Flavor::scale_adjusted: return "scale_adjusted";
    case Flavor::negative_beta: return "negative_beta";
    }
    return "unknown";
}

Flavor parse_flavor(std::string_view name) {
    if (name == "bernoulli" || name == "pcm") return Flavor::bernoulli;
    if (name == "cautious" || name == "ordinary") return Flavor::cautious;
    if (name == "scale_adjusted" || name == "scale-adjusted") return Flavor::scale_adjusted;
    if (name == "negative_beta" || name == "negative") return Flavor::negative_beta;
    throw precondition_error("unknown flavor '" + std::string(name) + "'");
}

MapSpec MapSpec::bernoulli(double rho) {
    if (!(rho > -1.0 && rho < 1.0)) {
        throw precondition_error("threshold shift rho must lie in (-1, 1), got " + fmt(rho));
    }
    return make(Flavor::bernoulli, 2.0, 1.0 + rho, 1.0, rho);
}

MapSpec MapSpec::cautious(double beta, double nu) {
    require_beta(beta);
    MapSpec m = make(Flavor::cautious, beta, nu, 1.0 / (beta - 1.0), 0.0);
    require_nu_in(m.threshold_band(), nu);
    return m;
}

MapSpec MapSpec::greedy(double beta) { return cautious(beta, 1.0); }

MapSpec MapSpec::lazy(double beta) {
    require_beta(beta);
    return cautious(beta, 1.0 / (beta - 1.0));
}

MapSpec MapSpec::scale_adjusted(double beta, double nu, double s) {
    require_beta(beta);
    require_scale(s);
    MapSpec m = make(Flavor::scale_adjusted, beta, nu, s, 0.0);
    require_nu_in(m.threshold_band(), nu);
    return m;
}

MapSpec MapSpec::negative_beta(double beta, double nu, double s) {
    require_beta(beta);
    require_scale(s);
    MapSpec m = make(Flavor::negative_beta, beta, nu, s, 0.0);
    require_nu_in(m.threshold_band(), nu);
    return m;
}

MapSpec MapSpec::with_nu(double new_nu) const {
    if (flavor == Flavor::bernoulli) {
        return bernoulli(new_nu - 1.0);
    }
    require_nu_in(threshold_band(), new_nu);
    MapSpec m = *this;
    m.nu = new_nu;
    return m;
}

double MapSpec::offset() const noexcept {
    switch (flavor) {
    case Flavor::bernoulli:
    case Flavor::cautious: return 1.0;
    case Flavor::scale_adjusted: return s * (beta - 1.0);
    case Flavor::negative_beta: return 0.0;
    }
    return 1.0;
}

Interval MapSpec::domain() const noexcept {
    switch (flavor) {
    case Flavor::bernoulli: return {0.0, 1.0};
    case Flavor::cautious: return {0.0, 1.0 / (beta - 1.0)};
    case Flavor::scale_adjusted:
    case Flavor::negative_beta: return {0.0, s};
    }
    return {0.0, 1.0};
}

Interval MapSpec::threshold_band() const noexcept {
    switch (flavor) {
    case Flavor::bernoulli: return {nu, nu};
    case Flavor::cautious: return {1.0, 1.0 / (beta - 1.0)};
    case Flavor::scale_adjusted:
    case Flavor::negative_beta: return {s * (beta - 1.0), s};
    }
    return {nu, nu};
}

double MapSpec::initial_width() const noexcept {
    switch (flavor) {
    case Flavor::bernoulli: return 1.0;
    case Flavor::cautious: return 1.0 / (beta - 1.0);
    case Flavor::scale_adjusted:
    case Flavor::negative_beta: return s;
    }
    return 1.0;
}

Step advance(const MapSpec& spec, double x) noexcept {
    Step st;
    st.bit = x >= spec.gamma * spec.nu ? 1 : 0;
    switch (spec.flavor) {
    case Flavor::bernoulli:
        st.next = 2.0 * x - st.bit;
        if (spec.rho != 0.0) {
            return st; // divergence is the point; no clamp
        }
        break;
    case Flavor::cautious: st.next = spec.beta * x - st.bit; break;
    case Flavor::scale_adjusted:
        st.next = spec.beta * x - (st.bit ? spec.s * (spec.beta - 1.0) : 0.0);
        break;
    case Flavor::negative_beta:
        st.next = st.bit ? spec.beta * spec.s - spec.beta * x : spec.s - spec.beta * x;
        break;
    }
    const Interval d = spec.domain();
    if (st.next < d.lo && st.next > d.lo - clamp_slack) {
        st.next = d.lo;
    } else if (st.next > d.hi && st.next < d.hi + clamp_slack) {
        st.next = d.hi;
    }
    return st;
}

Step map_step(const MapSpec& spec, double x) {
    const Interval d = spec.domain();
    if (!(x >= d.lo)) {
        throw precondition_error("sample x=" + fmt(x) + " below the domain lower bound " + fmt(d.lo));
    }
    const bool above = spec.flavor == Flavor::bernoulli ? !(x < d.hi) : !(x <= d.hi);
    if (above) {
        throw precondition_error("sample x=" + fmt(x) + " above the domain upper bound " + fmt(d.hi));
    }
    return advance(spec, x);
}

Orbit itinerary(const MapSpec& spec, double x, std::size_t n) {
    map_step(spec, x); // domain check only
    Orbit orbit;
    orbit.states.reserve(n + 1);
    orbit.symbols.reserve(n);
    const double c = spec.cut();
    double t = x;
    orbit.states.push_back(t);
    for (std::size_t j = 0; j < n; ++j) {
        if (t == c) {
            orbit.symbols.push_back(Symbol::star);
            break;
        }
        orbit.symbols.push_back(t < c ? Symbol::zero : Symbol::one);
        t = advance(spec, t).next;
        orbit.states.push_back(t);
    }
    return orbit;
}

Interval invariant_subinterval(const MapSpec& spec) {
    const double b = spec.beta;
    const double nu = spec.nu;
    const double s = spec.s;
    switch (spec.flavor) {
    case Flavor::bernoulli:
        if (spec.rho != 0.0) {
            throw no_invariant_interval_error(
                "no bounded invariant subinterval: Bernoulli map with threshold shift rho=" +
                fmt(spec.rho) + " diverges");
        }
        return {0.0, 1.0};
    case Flavor::cautious: return {nu - 1.0, nu};
    case Flavor::scale_adjusted: return {nu - s * (b - 1.0), nu};
    case Flavor::negative_beta: {
        const double lower_split = (b * b - b + 1.0) / (b + 1.0) * s;
        const double upper_split = (2.0 * b - 1.0) / (b + 1.0) * s;
        if (nu < lower_split) {
            return {b * nu - (b * b - b) * s, b * s - nu}; // right branch is full
        }
        if (nu < upper_split) {
            return {s - nu, b * s - nu}; // no full branch
        }
        return {s - nu, b * nu - s * (b - 1.0)}; // left branch is full
    }
    }
    return {0.0, 1.0};
}

std::size_t first_visit_time(const MapSpec& spec, double x, std::size_t max_iter) {
    const Interval target = invariant_subinterval(spec);
    map_step(spec, x);
    double t = x;
    for (std::size_t m = 0; m <= max_iter; ++m) {
        if (target.contains(t)) {
            return m;
        }
        t = advance(spec, t).next;
    }
    throw not_attracted_error("orbit of x=" + fmt(x) + " not attracted to [" + fmt(target.lo) +
                              ", " + fmt(target.hi) + ") within " + std::to_string(max_iter) +
                              " iterations");
}

double psi(double beta, double x) {
    const double top = 1.0 / (beta - 1.0);
    if (!(x >= 0.0 && x <= top)) {
        throw precondition_error("psi argument " + fmt(x) + " outside [0, " + fmt(top) + "]");
    }
    return top - x;
}

} // namespace betaenc
