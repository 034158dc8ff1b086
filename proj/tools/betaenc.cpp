// Command-line front end: single encodes/decodes, estimation, Markov and
// Kalman checks, and Monte Carlo sweeps.

#include "betaenc/decoder.hpp"
#include "betaenc/encoder.hpp"
#include "betaenc/errors.hpp"
#include "betaenc/estimation.hpp"
#include "betaenc/harness.hpp"
#include "betaenc/markov.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace betaenc;

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::uint8_t> parse_bits(const std::string& s) {
    std::vector<std::uint8_t> bits;
    for (char c : s) {
        if (c == '0' || c == '1') bits.push_back(static_cast<std::uint8_t>(c - '0'));
        else if (c != ',' && c != ' ') throw precondition_error(std::string("bad bit '") + c + "'");
    }
    return bits;
}

std::string bit_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

struct MapArgs {
    std::string flavor = "cautious";
    double beta = 1.5;
    std::optional<double> nu;
    std::optional<double> s;
    double rho = 0.0;

    void attach(CLI::App* app) {
        app->add_option("--flavor", flavor, "bernoulli | cautious | scale_adjusted | negative_beta");
        app->add_option("--beta", beta, "amplification factor in (1,2)");
        app->add_option("--nu", nu, "threshold (default: 1 for cautious, beta*s/2 otherwise)");
        app->add_option("-s,--scale", s, "scale for scale_adjusted / negative_beta");
        app->add_option("--rho", rho, "bernoulli threshold shift");
    }

    MapSpec build() const {
        switch (parse_flavor(flavor)) {
        case Flavor::bernoulli: return MapSpec::bernoulli(rho);
        case Flavor::cautious: return MapSpec::cautious(beta, nu.value_or(1.0));
        case Flavor::scale_adjusted: {
            const double sc = s.value_or(1.0 / (beta - 1.0));
            return MapSpec::scale_adjusted(beta, nu.value_or(beta * sc / 2.0), sc);
        }
        case Flavor::negative_beta: {
            const double sc = s.value_or(1.0 / (beta - 1.0));
            return MapSpec::negative_beta(beta, nu.value_or(beta * sc / 2.0), sc);
        }
        }
        return MapSpec::greedy(beta);
    }
};

void emit_rows(const std::vector<ExperimentSpec>& specs, const std::string& label,
               const std::string& out) {
    const auto rows = run_experiments(specs);
    if (out.empty()) {
        write_csv(std::cout, rows);
        return;
    }
    const std::filesystem::path parent = std::filesystem::path(out).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream csv(out, std::ios::binary);
    if (!csv) throw config_error("cannot write '" + out + "'");
    write_csv(csv, rows);
    std::string meta_path = out;
    const auto dot = meta_path.rfind('.');
    if (dot != std::string::npos && meta_path.find('/', dot) == std::string::npos) {
        meta_path.resize(dot);
    }
    meta_path += ".json";
    std::ofstream meta(meta_path, std::ios::binary);
    meta << metadata_json(label, specs);
    std::cerr << "wrote " << rows.size() << " rows to " << out << " and " << meta_path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"beta-encoder toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    // encode
    auto* enc = app.add_subcommand("encode", "encode one sample");
    MapArgs enc_map;
    enc_map.attach(enc);
    double enc_x = 0.0;
    std::size_t enc_L = 16;
    double enc_eps = 0.0;
    std::uint64_t enc_seed = 1;
    enc->add_option("-x,--x", enc_x, "sample")->required();
    enc->add_option("-L,--length", enc_L, "number of bits");
    enc->add_option("--epsilon", enc_eps, "threshold fluctuation bound");
    enc->add_option("--seed", enc_seed, "threshold sequence seed");

    // decode
    auto* dec = app.add_subcommand("decode", "decode a bit string");
    MapArgs dec_map;
    dec_map.attach(dec);
    std::string dec_bits;
    int dec_mode = 1;
    dec->add_option("--bits", dec_bits, "bits, e.g. 0100")->required();
    dec->add_option("--mode", dec_mode, "p_L: 0 left, 1 midpoint, 2 right");

    // estimate-beta
    auto* est = app.add_subcommand("estimate-beta", "recover beta from paired bit strings");
    std::string est_bx, est_by;
    int est_mode = 1;
    bool est_negative = false;
    double est_s = 2.0;
    est->add_option("--bits-x", est_bx, "bits of x")->required();
    est->add_option("--bits-y", est_by, "bits of 1 - x")->required();
    est->add_option("--mode", est_mode, "p_L tail mode");
    est->add_flag("--negative", est_negative, "negative-flavor polynomial");
    est->add_option("-s,--scale", est_s, "scale of the negative encoder");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo sweep from a config file");
    std::string sweep_config, sweep_out;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<std::size_t> sweep_samples;
    std::optional<unsigned> sweep_threads;
    bool sweep_quick = false;
    sweep->add_option("--config", sweep_config, "JSON experiment file")->required();
    sweep->add_option("--seed", sweep_seed);
    sweep->add_option("--samples", sweep_samples);
    sweep->add_option("--threads", sweep_threads);
    sweep->add_flag("--quick", sweep_quick, "1000 samples x 20 thresholds");
    sweep->add_option("--out", sweep_out, "CSV path (a .json sidecar is written next to it)");

    // markov
    auto* mk = app.add_subcommand("markov", "analytic and empirical two-state chain");
    double mk_beta = 1.5, mk_nu = 1.0, mk_x0 = 0.3141592653589793;
    std::size_t mk_n = 100000;
    mk->add_option("--beta", mk_beta);
    mk->add_option("--nu", mk_nu);
    mk->add_option("--bits", mk_n, "orbit length");
    mk->add_option("--x0", mk_x0, "orbit start");

    // kalman
    auto* km = app.add_subcommand("kalman", "embed a 2x2 chain into a piecewise-linear map");
    std::vector<double> km_p{0.3, 0.7, 0.6, 0.4};
    double km_d1 = 0.5;
    km->add_option("--matrix", km_p, "p00 p01 p10 p11")->expected(4)->delimiter(',');
    km->add_option("--d1", km_d1, "outer breakpoint");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "run a figure recipe");
    std::string rep_fig, rep_out;
    std::uint64_t rep_seed = 1;
    bool rep_quick = false;
    unsigned rep_threads = 1;
    rep->add_option("figure", rep_fig, "fig4 fig6 fig7 fig8 fig9 fig10 fig13 ... fig18")
        ->required();
    rep->add_option("--seed", rep_seed);
    rep->add_flag("--quick", rep_quick, "1000 samples x 20 thresholds");
    rep->add_option("--threads", rep_threads);
    rep->add_option("--out", rep_out, "CSV path (a .json sidecar is written next to it)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enc) {
            const MapSpec spec = enc_map.build();
            ThresholdSequence th = enc_eps > 0.0
                ? make_threshold_sequence(spec.threshold_band(), spec.nu, enc_eps, enc_L, enc_seed)
                : constant_thresholds(spec.nu, enc_L);
            const BitRecord r = encode(spec, enc_x, th);
            std::cout << "bits " << bit_string(r.bits) << "\n"
                      << "residue " << g17(r.residue) << "\n"
                      << "reconstructed " << g17(reconstruct(r)) << "\n"
                      << "decoded " << g17(decode(r, DecodeMode::midpoint)) << "\n";
        } else if (*dec) {
            const auto bits = parse_bits(dec_bits);
            const auto params = DecoderParams::from(dec_map.build());
            const auto mode = decode_mode_from_int(dec_mode);
            std::cout << "decoded " << g17(decode(bits, params, mode)) << "\n"
                      << "bound " << g17(error_bound(params, bits.size(), mode)) << "\n";
        } else if (*est) {
            const auto bx = parse_bits(est_bx);
            const auto by = parse_bits(est_by);
            if (est_negative) {
                const auto roots = estimate_beta_negative(bx, by, est_s);
                std::cout << "roots " << roots.size() << "\n";
                for (const auto& r : roots) {
                    std::cout << "gamma_hat " << g17(r.gamma_hat) << " beta_hat " << g17(r.beta_hat)
                              << " residual " << g17(r.residual) << "\n";
                }
            } else {
                const auto r = estimate_beta(bx, by, decode_mode_from_int(est_mode));
                std::cout << "gamma_hat " << g17(r.gamma_hat) << "\n"
                          << "beta_hat " << g17(r.beta_hat) << "\n"
                          << "residual " << g17(r.residual) << "\n";
            }
        } else if (*sweep) {
            ExperimentSpec spec = load_experiment_spec(sweep_config);
            if (sweep_seed) spec.seed = *sweep_seed;
            if (sweep_samples) spec.samples = *sweep_samples;
            if (sweep_threads) spec.threads = *sweep_threads;
            if (sweep_quick) {
                spec.samples = 1000;
                spec.nu_count = 20;
            }
            emit_rows({spec}, spec.name, sweep_out);
        } else if (*mk) {
            const AnalyticChain a = analytic_transition(mk_beta, mk_nu);
            const char* region = a.region == TransitionRegion::lower    ? "lower"
                                 : a.region == TransitionRegion::middle ? "middle"
                                                                        : "upper";
            std::cout << "region " << region << "\n"
                      << "analytic " << g17(a.P(0, 0)) << " " << g17(a.P(0, 1)) << " "
                      << g17(a.P(1, 0)) << " " << g17(a.P(1, 1)) << "\n"
                      << "stationary " << g17(a.stationary.pi0) << " " << g17(a.stationary.pi1)
                      << "\n"
                      << "lambda2 " << g17(a.lambda2) << "\n";
            if (a.region_formula_disagrees) {
                std::cout << "lambda2_middle_formula " << g17(a.lambda_middle_formula) << "\n";
            }
            const auto bits = orbit_bits(MapSpec::cautious(mk_beta, mk_nu), mk_x0, mk_n);
            const EmpiricalChain e = empirical_transition(bits);
            std::cout << "empirical " << g17(e.P(0, 0)) << " " << g17(e.P(0, 1)) << " "
                      << g17(e.P(1, 0)) << " " << g17(e.P(1, 1)) << "\n"
                      << "empirical_lambda2 " << g17(e.lambda2) << "\n";
        } else if (*km) {
            TransitionMatrix2 P;
            P.p = {{{km_p[0], km_p[1]}, {km_p[2], km_p[3]}}};
            const KalmanMap k = kalman_embed(P, km_d1);
            const KalmanCheck c = kalman_verify(k);
            for (int i = 0; i < 2; ++i) {
                std::cout << "J" << i + 1 << " (" << g17(k.outer[i]) << ", " << g17(k.outer[i + 1])
                          << "] split at " << g17(k.inner[i][1]) << "\n";
            }
            std::cout << "spectrum";
            for (double v : c.spectrum) std::cout << " " << g17(v);
            std::cout << "\nmatches " << (c.matches ? "true" : "false") << "\n";
            return c.matches ? 0 : 1;
        } else if (*rep) {
            auto specs = recipe(rep_fig, rep_quick, rep_seed);
            for (auto& s : specs) s.threads = rep_threads;
            emit_rows(specs, rep_fig, rep_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
