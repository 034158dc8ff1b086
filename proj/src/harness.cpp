#include "betaenc/harness.hpp"

#include "betaenc/decoder.hpp"
#include "betaenc/encoder.hpp"
#include "betaenc/errors.hpp"
#include "betaenc/estimation.hpp"
#include "betaenc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <tuple>

namespace betaenc {

namespace {

constexpr double bound_slack = 1e-12;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Running mean and variance of squared errors.
struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++n;
        const double delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
    }
    double value() const { return n ? mean : std::numeric_limits<double>::quiet_NaN(); }
    double stderr_() const {
        if (n < 2) return n ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        const double var = m2 / static_cast<double>(n - 1);
        return std::sqrt(var / static_cast<double>(n));
    }
};

Interval legal_band(Flavor f, double beta, double s) {
    if (f == Flavor::cautious) return {1.0, 1.0 / (beta - 1.0)};
    return {s * (beta - 1.0), s};
}

ResultRow run_cell(const CellCoordinates& cell, std::size_t n, const double* xs,
                   std::uint64_t seed) {
    const MapSpec base = cell.map();
    const Interval band = base.threshold_band();
    const DecoderParams dp = DecoderParams::from(base);
    const DecodeMode mode = decode_mode_from_int(cell.p_L);
    const double bound = error_bound(dp, cell.L, mode);

    ResultRow row;
    row.cell = cell;
    row.samples = n;
    Moments est, exact, beta_err;

    Rng rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform01();
        const std::uint64_t th_seed = rng.next();
        const double x = xs ? xs[k] : u;
        const ThresholdSequence th =
            make_threshold_sequence(band, cell.nu_star, cell.epsilon, cell.L, th_seed);

        const BitRecord rx = encode(base, x, th);
        const double err = x - decode(rx.bits, dp, mode);
        exact.add(err * err);
        if (std::abs(err) > bound + bound_slack) ++row.violations;
        if (!cell.estimated) {
            est.add(err * err);
            continue;
        }

        const BitRecord ry = encode(base, 1.0 - x, th);
        double beta_hat = std::numeric_limits<double>::quiet_NaN();
        if (base.is_ordinary()) {
            try {
                beta_hat = estimate_beta(rx.bits, ry.bits, mode).beta_hat;
            } catch (const estimation_error&) {
            }
        } else {
            const auto roots = estimate_beta_negative(rx.bits, ry.bits, base.s);
            if (roots.size() > 1) ++row.multi_root_samples;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& r : roots) {
                if (std::abs(r.beta_hat - cell.beta) < best) {
                    best = std::abs(r.beta_hat - cell.beta);
                    beta_hat = r.beta_hat;
                }
            }
        }
        if (!std::isfinite(beta_hat)) {
            ++row.estimation_failures;
            continue;
        }
        const double e = x - decode(rx.bits, dp.with_beta(beta_hat), mode);
        est.add(e * e);
        beta_err.add((beta_hat - cell.beta) * (beta_hat - cell.beta));
    }

    row.mse_x = est.value();
    row.se_x = est.stderr_();
    row.mse_x_exact = exact.value();
    row.se_x_exact = exact.stderr_();
    if (cell.estimated) {
        row.mse_beta = beta_err.value();
        row.se_beta = beta_err.stderr_();
    } else {
        row.mse_beta = row.se_beta = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

} // namespace

double resolved_scale(const ExperimentSpec& spec, double beta) {
    return spec.s.value_or(1.0 / (beta - 1.0));
}

void validate(const ExperimentSpec& spec) {
    auto fail = [&](const std::string& msg) { throw config_error(spec.name + ": " + msg); };
    if (spec.flavor == Flavor::bernoulli) {
        fail("the bernoulli flavor has no threshold grid; sweeps support cautious, "
             "scale_adjusted and negative_beta");
    }
    if (spec.betas.empty()) fail("beta list is empty");
    if (spec.L < 1) fail("L must be at least 1");
    if (spec.nu_values.empty() && spec.nu_count < 1) fail("nu grid is empty");
    if (spec.epsilons.empty()) fail("epsilon list is empty");
    if (spec.p_modes.empty()) fail("p_L list is empty");
    if (spec.samples < 1) fail("samples must be at least 1");
    if (spec.threads < 1) fail("threads must be at least 1");
    for (double e : spec.epsilons) {
        if (!(e >= 0.0 && e < 1.0)) fail("epsilon " + fmt(e) + " outside [0, 1)");
    }
    for (int p : spec.p_modes) {
        if (p < 0 || p > 2) fail("p_L " + std::to_string(p) + " is not 0, 1 or 2");
    }
    if (spec.use_estimated_beta && spec.flavor == Flavor::scale_adjusted) {
        fail("beta estimation is defined for the cautious and negative_beta flavors only");
    }
    if (spec.flavor == Flavor::cautious && spec.s) {
        fail("the cautious flavor has no free scale s");
    }
    for (double b : spec.betas) {
        if (!(b > 1.0 && b < 2.0)) fail("beta " + fmt(b) + " outside (1, 2)");
        const double s = resolved_scale(spec, b);
        if (!(s >= 1.0) || !std::isfinite(s)) {
            fail("scale s=" + fmt(s) + " must be at least 1 so that samples on [0,1) are legal");
        }
        const Interval legal = legal_band(spec.flavor, b, s);
        if (spec.nu_band) {
            if (!(spec.nu_band->lo <= spec.nu_band->hi)) fail("nu band is reversed");
            if (!legal.contains_closed(spec.nu_band->lo) || !legal.contains_closed(spec.nu_band->hi)) {
                fail("nu band [" + fmt(spec.nu_band->lo) + ", " + fmt(spec.nu_band->hi) +
                     "] leaves the legal band [" + fmt(legal.lo) + ", " + fmt(legal.hi) + "]");
            }
        }
        for (double nu : spec.nu_values) {
            if (!legal.contains_closed(nu)) {
                fail("nu " + fmt(nu) + " outside the legal band [" + fmt(legal.lo) + ", " +
                     fmt(legal.hi) + "]");
            }
        }
    }
}

std::vector<double> nu_grid(const ExperimentSpec& spec, double beta) {
    if (!spec.nu_values.empty()) return spec.nu_values;
    const Interval band =
        spec.nu_band.value_or(legal_band(spec.flavor, beta, resolved_scale(spec, beta)));
    std::vector<double> g(spec.nu_count);
    if (spec.nu_count == 1) {
        g[0] = band.lo;
        return g;
    }
    const double step = band.width() / static_cast<double>(spec.nu_count - 1);
    for (std::size_t k = 0; k < spec.nu_count; ++k) g[k] = band.lo + static_cast<double>(k) * step;
    g.back() = band.hi;
    return g;
}

MapSpec CellCoordinates::map() const {
    switch (flavor) {
    case Flavor::cautious: return MapSpec::cautious(beta, nu_star);
    case Flavor::scale_adjusted: return MapSpec::scale_adjusted(beta, nu_star, s);
    case Flavor::negative_beta: return MapSpec::negative_beta(beta, nu_star, s);
    case Flavor::bernoulli: break;
    }
    throw config_error("the bernoulli flavor is not a sweep cell");
}

bool operator<(const CellCoordinates& a, const CellCoordinates& b) {
    return std::make_tuple(to_string(a.flavor), a.beta, a.L, a.s, a.nu_star, a.epsilon, a.p_L,
                           a.estimated) < std::make_tuple(to_string(b.flavor), b.beta, b.L, b.s,
                                                          b.nu_star, b.epsilon, b.p_L, b.estimated);
}

std::uint64_t cell_seed(std::uint64_t master, const CellCoordinates& cell) {
    std::uint64_t h = combine_seed(master, cell.beta);
    h = combine_seed(h, static_cast<std::uint64_t>(cell.L));
    h = combine_seed(h, cell.nu_star);
    return combine_seed(h, cell.epsilon);
}

ResultRow mse_cell(const CellCoordinates& cell, std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw precondition_error("mse_cell needs at least one sample");
    return run_cell(cell, samples, nullptr, seed);
}

ResultRow mse_cell(const CellCoordinates& cell, std::span<const double> xs, std::uint64_t seed) {
    if (xs.empty()) throw precondition_error("mse_cell needs at least one sample");
    return run_cell(cell, xs.size(), xs.data(), seed);
}

std::vector<CellCoordinates> expand_cells(const ExperimentSpec& spec) {
    std::vector<CellCoordinates> cells;
    for (double beta : spec.betas) {
        const double s = resolved_scale(spec, beta);
        for (double nu : nu_grid(spec, beta)) {
            for (double eps : spec.epsilons) {
                for (int p : spec.p_modes) {
                    cells.push_back({spec.flavor, beta, spec.L, s, nu, eps, p,
                                     spec.use_estimated_beta});
                }
            }
        }
    }
    return cells;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    const auto cells = expand_cells(spec);
    std::vector<ResultRow> rows(cells.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            rows[i] = mse_cell(cells[i], spec.samples, cell_seed(spec.seed, cells[i]));
        }
    };
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(spec.threads, cells.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const ResultRow& a, const ResultRow& b) { return a.cell < b.cell; });
    return rows;
}

std::vector<ResultRow> run_experiments(std::span<const ExperimentSpec> specs) {
    for (const auto& s : specs) validate(s);
    std::vector<ResultRow> all;
    for (const auto& s : specs) {
        auto rows = run_experiment(s);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const ResultRow& a, const ResultRow& b) { return a.cell < b.cell; });
    return all;
}

} // namespace betaenc
