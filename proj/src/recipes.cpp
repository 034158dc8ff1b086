#include "betaenc/errors.hpp"
#include "betaenc/harness.hpp"

#include <string>

namespace betaenc {

namespace {

ExperimentSpec base(std::string name, Flavor flavor, double beta, std::size_t L) {
    ExperimentSpec s;
    s.name = std::move(name);
    s.flavor = flavor;
    s.betas = {beta};
    s.L = L;
    return s;
}

// Ordinary rows plus negative rows over the same thresholds (beta = 1.5, s = 2
// gives both flavors the band [1, 2]).
std::vector<ExperimentSpec> paired(const std::string& name, std::vector<double> eps,
                                   bool estimated) {
    ExperimentSpec ord = base(name, Flavor::cautious, 1.5, 16);
    ord.epsilons = eps;
    ord.use_estimated_beta = estimated;
    ExperimentSpec neg = base(name, Flavor::negative_beta, 1.5, 16);
    neg.s = 2.0;
    neg.epsilons = std::move(eps);
    neg.use_estimated_beta = estimated;
    return {ord, neg};
}

} // namespace

std::vector<std::string> recipe_names() {
    return {"fig4",  "fig6",  "fig7",  "fig8",  "fig9",  "fig10",
            "fig13", "fig14", "fig15", "fig16", "fig17", "fig18"};
}

std::vector<ExperimentSpec> recipe(std::string_view name, bool quick, std::uint64_t seed) {
    const std::string n(name);
    std::vector<ExperimentSpec> out;

    if (n == "fig4") {
        auto s = base(n, Flavor::cautious, 1.5, 16);
        s.p_modes = {0, 1, 2};
        out = {s};
    } else if (n == "fig6" || n == "fig7") {
        auto s = base(n, Flavor::cautious, 1.77777, 32);
        s.p_modes = {0, 1, 2};
        s.use_estimated_beta = true;
        out = {s};
    } else if (n == "fig8" || n == "fig9") {
        auto s = base(n, Flavor::cautious, 1.5, 16);
        s.epsilons = {0.0, 0.2, 0.3, 0.4};
        s.p_modes = {0, 1};
        s.use_estimated_beta = true;
        out = {s};
    } else if (n == "fig10") {
        auto s = base(n, Flavor::cautious, 1.5, 16);
        s.epsilons = {0.0, 0.1, 0.2, 0.3, 0.4};
        s.p_modes = {0, 1};
        out = {s};
    } else if (n == "fig13") {
        out = paired(n, {0.0, 0.2, 0.3, 0.4}, false);
    } else if (n == "fig14" || n == "fig15") {
        auto s = base(n, Flavor::negative_beta, 1.5, 16);
        s.s = 2.0;
        s.epsilons = {0.0, 0.2, 0.3, 0.4};
        s.use_estimated_beta = true;
        out = {s};
    } else if (n == "fig16") {
        out = paired(n, {0.0}, false);
    } else if (n == "fig17" || n == "fig18") {
        out = paired(n, {0.0}, true);
    } else {
        throw config_error("unknown recipe '" + n + "'");
    }

    for (auto& s : out) {
        s.seed = seed;
        if (quick) {
            s.samples = 1000;
            s.nu_count = 20;
        }
    }
    return out;
}

} // namespace betaenc
