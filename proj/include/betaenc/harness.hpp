#pragma once

#include "betaenc/maps.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace betaenc {

inline constexpr std::string_view version = "0.1.0";

// One Monte Carlo sweep: the cartesian product betas x nu grid x epsilons x p_modes.
struct ExperimentSpec {
    std::string name = "sweep";
    Flavor flavor = Flavor::cautious;
    std::vector<double> betas{1.5};
    std::size_t L = 16;
    std::size_t nu_count = 100;
    std::optional<Interval> nu_band;  // default: the flavor's legal threshold band
    std::vector<double> nu_values;    // explicit thresholds; replaces the grid when non-empty
    std::vector<double> epsilons{0.0};
    std::vector<int> p_modes{1};
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    bool use_estimated_beta = false;
    std::optional<double> s;          // default (beta-1)^-1
    unsigned threads = 1;
};

// Throws config_error describing the first problem found.
void validate(const ExperimentSpec& spec);

double resolved_scale(const ExperimentSpec& spec, double beta);

// Evenly spaced, both endpoints included.
std::vector<double> nu_grid(const ExperimentSpec& spec, double beta);

struct CellCoordinates {
    Flavor flavor = Flavor::cautious;
    double beta = 1.5;
    std::size_t L = 16;
    double s = 2.0;
    double nu_star = 1.0;
    double epsilon = 0.0;
    int p_L = 1;
    bool estimated = false;

    MapSpec map() const;
};

bool operator<(const CellCoordinates& a, const CellCoordinates& b);

struct ResultRow {
    CellCoordinates cell;
    std::size_t samples = 0;
    double mse_x = 0.0;       // decoded with the beta the cell uses (estimate when estimated)
    double se_x = 0.0;
    double mse_x_exact = 0.0; // decoded with the true beta
    double se_x_exact = 0.0;
    double mse_beta = 0.0;    // NaN unless estimated
    double se_beta = 0.0;
    std::size_t violations = 0;          // exact-beta decodes outside the error bound
    std::size_t estimation_failures = 0; // samples without a usable root
    std::size_t multi_root_samples = 0;  // negative flavor: samples with more than one root
};

// Seed of a cell; flavor and p_L are left out so that cells differing only in
// those share samples and threshold sequences.
std::uint64_t cell_seed(std::uint64_t master, const CellCoordinates& cell);

// Draws x uniform on [0,1) and a threshold sequence per sample from Rng(seed).
ResultRow mse_cell(const CellCoordinates& cell, std::size_t samples, std::uint64_t seed);

// Same, with the samples supplied by the caller.
ResultRow mse_cell(const CellCoordinates& cell, std::span<const double> xs, std::uint64_t seed);

std::vector<CellCoordinates> expand_cells(const ExperimentSpec& spec);

// Rows ordered by coordinates, independent of the thread count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);
std::vector<ResultRow> run_experiments(std::span<const ExperimentSpec> specs);

// Figure recipes: fig4, fig6, ..., fig18.
std::vector<std::string> recipe_names();
std::vector<ExperimentSpec> recipe(std::string_view name, bool quick = false,
                                   std::uint64_t seed = 1);

// CSV with a fixed header, floats at 17 significant digits.
extern const char* const csv_header;
void write_csv(std::ostream& out, std::span<const ResultRow> rows);

// JSON sidecar describing how the rows were produced.
std::string metadata_json(std::string_view label, std::span<const ExperimentSpec> specs);

// Config file (JSON object mirroring ExperimentSpec).
ExperimentSpec spec_from_json_text(std::string_view text);
ExperimentSpec load_experiment_spec(const std::string& path);
std::string spec_to_json_text(const ExperimentSpec& spec);

} // namespace betaenc
