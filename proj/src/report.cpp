#include "betaenc/errors.hpp"
#include "betaenc/harness.hpp"
#include "betaenc/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace betaenc {

namespace {

using nlohmann::json;

void put(std::ostream& out, double v) {
    if (std::isnan(v)) return; // empty field
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

json spec_json(const ExperimentSpec& s) {
    json j;
    j["name"] = s.name;
    j["flavor"] = std::string(to_string(s.flavor));
    j["betas"] = s.betas;
    j["L"] = s.L;
    j["nu_count"] = s.nu_count;
    if (s.nu_band) j["nu_band"] = {s.nu_band->lo, s.nu_band->hi};
    if (!s.nu_values.empty()) j["nu_values"] = s.nu_values;
    j["epsilons"] = s.epsilons;
    j["p_modes"] = s.p_modes;
    j["samples"] = s.samples;
    j["seed"] = s.seed;
    j["use_estimated_beta"] = s.use_estimated_beta;
    if (s.s) j["s"] = *s.s;
    j["threads"] = s.threads;
    return j;
}

template <typename T>
void read(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

} // namespace

const char* const csv_header =
    "flavor,beta,L,s,nu_star,epsilon,p_L,estimated_beta,samples,mse_x,se_x,mse_x_exact,"
    "se_x_exact,mse_beta,se_beta,violations,estimation_failures,multi_root_samples";

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
    out << csv_header << '\n';
    for (const auto& r : rows) {
        const auto& c = r.cell;
        out << to_string(c.flavor) << ',';
        put(out, c.beta);
        out << ',' << c.L << ',';
        put(out, c.s);
        out << ',';
        put(out, c.nu_star);
        out << ',';
        put(out, c.epsilon);
        out << ',' << c.p_L << ',' << (c.estimated ? 1 : 0) << ',' << r.samples << ',';
        put(out, r.mse_x);
        out << ',';
        put(out, r.se_x);
        out << ',';
        put(out, r.mse_x_exact);
        out << ',';
        put(out, r.se_x_exact);
        out << ',';
        put(out, r.mse_beta);
        out << ',';
        put(out, r.se_beta);
        out << ',' << r.violations << ',' << r.estimation_failures << ','
            << r.multi_root_samples << '\n';
    }
}

std::string metadata_json(std::string_view label, std::span<const ExperimentSpec> specs) {
    json j;
    j["label"] = std::string(label);
    j["version"] = std::string(version);
    j["rng"] = std::string(Rng::name);
    j["seed_derivation"] = "splitmix64 hash of (seed, beta, L, nu_star, epsilon)";
    j["sample_distribution"] = "x uniform on [0,1)";
    j["u_distribution"] = "uniform on [-epsilon, epsilon]";
    j["clip_policy"] = "clip nu_star*(1+u) to the legal threshold band";
    j["pairing"] = "y = 1 - x is encoded with the threshold sequence of x";
    j["negative_root_choice"] = "root closest to the nominal beta";
    j["estimation_failures"] = "excluded from mse_x and mse_beta, counted per row";
    j["csv_header"] = csv_header;
    json arr = json::array();
    for (const auto& s : specs) arr.push_back(spec_json(s));
    j["experiments"] = arr;
    return j.dump(2) + "\n";
}

std::string spec_to_json_text(const ExperimentSpec& spec) { return spec_json(spec).dump(2) + "\n"; }

ExperimentSpec spec_from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config must be a JSON object");

    static const char* const known[] = {"name",     "flavor",   "betas",  "beta",
                                        "L",        "nu_count", "nu_band", "nu_values",
                                        "epsilons", "p_modes",  "samples", "seed",
                                        "use_estimated_beta",   "s",       "threads"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw config_error("unknown config key '" + key + "'");
        }
    }

    ExperimentSpec s;
    try {
        read(j, "name", s.name);
        if (j.contains("flavor")) s.flavor = parse_flavor(j.at("flavor").get<std::string>());
        read(j, "betas", s.betas);
        if (j.contains("beta")) s.betas = {j.at("beta").get<double>()};
        read(j, "L", s.L);
        read(j, "nu_count", s.nu_count);
        if (j.contains("nu_band")) {
            const auto band = j.at("nu_band").get<std::vector<double>>();
            if (band.size() != 2) throw config_error("nu_band needs two numbers");
            s.nu_band = Interval{band[0], band[1]};
        }
        read(j, "nu_values", s.nu_values);
        read(j, "epsilons", s.epsilons);
        read(j, "p_modes", s.p_modes);
        read(j, "samples", s.samples);
        read(j, "seed", s.seed);
        read(j, "use_estimated_beta", s.use_estimated_beta);
        if (j.contains("s")) s.s = j.at("s").get<double>();
        read(j, "threads", s.threads);
    } catch (const json::exception& e) {
        throw config_error(std::string("bad config value: ") + e.what());
    } catch (const precondition_error& e) {
        throw config_error(e.what());
    }
    return s;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return spec_from_json_text(buf.str());
}

} // namespace betaenc
