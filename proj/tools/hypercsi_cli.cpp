#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <hypercsi/estimator.hpp>
#include <hypercsi/io.hpp>
#include <hypercsi/kernels.hpp>
#include <hypercsi/mc.hpp>
#include <hypercsi/metrics.hpp>
#include <hypercsi/synth.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hypercsi;

namespace {

// Exit codes: 0 success, 2 flag/validation error, 3 data error, 4 numerical
// failure.
int classify(const Error& e) {
    if (dynamic_cast<const InvalidParameter*>(&e)) return 2;
    if (dynamic_cast<const InvalidGamma*>(&e)) return 2;
    if (dynamic_cast<const ShapeMismatch*>(&e)) return 3;
    if (dynamic_cast<const DimensionMismatch*>(&e)) return 3;
    if (dynamic_cast<const TooFewPixels*>(&e)) return 3;
    if (dynamic_cast<const TooFewBands*>(&e)) return 3;
    if (dynamic_cast<const TooManyPixels*>(&e)) return 3;
    if (dynamic_cast<const RankDeficientSpectra*>(&e)) return 3;
    const auto& id = typeid(e);
    if (id == typeid(Error)) return 3;  // plain I/O failures
    return 4;
}

VectorXd parse_gamma(const std::string& text, int n) {
    if (text.empty()) return VectorXd::Constant(n, 1.0 / n);
    std::vector<double> values;
    std::string token;
    std::istringstream stream(text);
    while (std::getline(stream, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw InvalidParameter("malformed --gamma value '" + token + "'");
        }
    }
    if (values.size() == 1) return VectorXd::Constant(n, values[0]);
    if (static_cast<int>(values.size()) != n)
        throw InvalidParameter("--gamma needs one value or one per endmember");
    return Eigen::Map<VectorXd>(values.data(), n);
}

struct GenerateArgs {
    int bands = 224;
    int pixels = 10000;
    int endmembers = 0;
    double purity = 1.0;
    std::optional<double> snr_db;
    uint64_t seed = 0;
    std::string gamma;
    std::string pattern = "iid";
    std::string spectra_file;
    std::string output;
};

int run_generate(const GenerateArgs& args) {
    synth::SceneSpec spec;
    spec.n_bands = args.bands;
    spec.n_pixels = args.pixels;
    spec.n_endmembers = args.endmembers;
    spec.dirichlet_gamma = parse_gamma(args.gamma, args.endmembers);
    spec.purity_rho = args.purity;
    spec.snr_db = args.snr_db;
    spec.seed = args.seed;

    const auto pattern = args.pattern == "block" ? synth::AbundancePattern::kBlockSparse
                                                 : synth::AbundancePattern::kIidDirichlet;

    std::optional<MatrixXd> user_spectra;
    if (!args.spectra_file.empty()) user_spectra = io::read_csv(args.spectra_file);

    const synth::GroundTruth truth = synth::generate_abundance_maps(
        spec, pattern, user_spectra ? &*user_spectra : nullptr);

    fs::create_directories(args.output);
    const fs::path dir = args.output;
    io::write_dataset(dir / "observed.hsd",
                      {truth.observed, args.endmembers});
    io::write_dataset(dir / "noiseless.hsd",
                      {truth.noiseless, args.endmembers});
    io::write_csv(dir / "spectra.csv", truth.spectra);
    io::write_csv(dir / "abundance.csv", truth.abundances.transpose());

    std::printf("wrote %s (%d bands x %d pixels, %d endmembers)\n",
                dir.string().c_str(), args.bands, args.pixels, args.endmembers);
    std::printf("max purity: %.6f\n", truth.max_purity);
    if (args.snr_db)
        std::printf("realized SNR: %.3f dB (nominal %.3f dB, sigma2 %.6g)\n",
                    truth.realized_snr_db, *args.snr_db, truth.sigma2);
    else
        std::printf("noiseless scene\n");
    return 0;
}

struct UnmixArgs {
    std::string data;
    int endmembers = 0;
    double eta = 0.9;
    bool no_shift = false;
    int threads = 0;
    std::string output;
};

int run_unmix(const UnmixArgs& args) {
    const SpectralDataset data = io::read_dataset(args.data);
    UnmixOptions options;
    options.eta = args.eta;
    options.no_shift = args.no_shift;
    options.threads = kernels::resolve_threads(args.threads);

    const UnmixResult result = unmix(data, args.endmembers, options);

    fs::create_directories(args.output);
    const fs::path dir = args.output;
    io::write_csv(dir / "endmembers.csv", result.endmembers.spectra);
    io::write_csv(dir / "abundances.csv", result.abundances);

    std::ofstream log(dir / "diagnostics.jsonl");
    log << json{{"command", "unmix"},
                {"data", args.data},
                {"endmembers", args.endmembers},
                {"eta", args.eta},
                {"no_shift", args.no_shift},
                {"threads", options.threads}}
               .dump()
        << '\n';
    log << json{{"radius", result.diagnostics.radius},
                {"c_prime", result.diagnostics.c_prime},
                {"c", result.diagnostics.c},
                {"purest", result.diagnostics.purest},
                {"active_pixels", result.diagnostics.active_pixels},
                {"clamped_entries", result.diagnostics.clamped_entries},
                {"min_lifted_entry", result.diagnostics.min_lifted_entry},
                {"warnings", result.diagnostics.warnings}}
               .dump()
        << '\n';
    json timings = json::object();
    double total = 0.0;
    for (const auto& stage : result.diagnostics.timings) {
        timings[stage.stage] = stage.seconds;
        total += stage.seconds;
    }
    timings["total"] = total;
    log << json{{"timings", timings}}.dump() << '\n';

    for (const auto& warning : result.diagnostics.warnings)
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    std::printf("wrote %s (c' = %.6g, c = %.6g, r = %.6g, %.3f s)\n",
                dir.string().c_str(), result.diagnostics.c_prime, result.diagnostics.c,
                result.diagnostics.radius, total);
    return 0;
}

struct EvalArgs {
    std::string truth;
    std::string est;
    std::string output;
};

int run_eval(const EvalArgs& args) {
    const MatrixXd true_spectra = io::read_csv(fs::path(args.truth) / "spectra.csv");
    const MatrixXd true_maps = io::read_csv(fs::path(args.truth) / "abundance.csv");
    const MatrixXd est_spectra = io::read_csv(fs::path(args.est) / "endmembers.csv");
    const MatrixXd est_maps = io::read_csv(fs::path(args.est) / "abundances.csv");

    const metrics::MatchReport endmember_report =
        metrics::match_spectra(true_spectra, est_spectra);
    const metrics::MatchReport map_report = metrics::match_maps(true_maps, est_maps);

    std::printf("phi_en_deg: %.6g\n", endmember_report.rms_deg);
    std::printf("phi_ab_deg: %.6g\n", map_report.rms_deg);
    for (size_t i = 0; i < endmember_report.permutation.size(); ++i)
        std::printf("endmember %zu -> estimate %d: angle %.6g deg\n", i + 1,
                    endmember_report.permutation[i] + 1,
                    endmember_report.angles_deg(static_cast<Eigen::Index>(i)));

    json report{{"phi_en_deg", endmember_report.rms_deg},
                {"phi_ab_deg", map_report.rms_deg},
                {"endmember_permutation", endmember_report.permutation},
                {"endmember_angles_deg",
                 std::vector<double>(endmember_report.angles_deg.data(),
                                     endmember_report.angles_deg.data() +
                                         endmember_report.angles_deg.size())},
                {"map_permutation", map_report.permutation},
                {"map_angles_deg",
                 std::vector<double>(map_report.angles_deg.data(),
                                     map_report.angles_deg.data() +
                                         map_report.angles_deg.size())}};
    const fs::path out =
        args.output.empty() ? fs::path(args.est) / "metrics.json" : fs::path(args.output);
    std::ofstream(out) << report.dump(2) << '\n';
    std::printf("wrote %s\n", out.string().c_str());
    return 0;
}

struct McArgs {
    std::string sweep;
    std::string output;
    int threads = 0;
};

int run_mc(const McArgs& args) {
    const mc::SweepConfig config = mc::parse_sweep_config(fs::path(args.sweep));
    const mc::SweepResult result =
        mc::run_sweep(config, kernels::resolve_threads(args.threads));

    std::ofstream out(args.output);
    if (!out) throw Error("cannot open " + args.output + " for writing");
    mc::write_results_csv(out, result);

    for (const auto& mean : result.means) {
        std::printf("N=%d L=%d snr=%s rho=%.3g: mean phi_en %.4f deg, phi_ab %.4f deg, "
                    "%.4f s\n",
                    mean.n_endmembers, mean.n_pixels,
                    mean.snr_db ? std::to_string(*mean.snr_db).c_str() : "inf",
                    mean.purity_rho, mean.phi_en_deg, mean.phi_ab_deg, mean.wall_time_s);
    }
    std::printf("wrote %s (%zu rows)\n", args.output.c_str(), result.rows.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HyperCSI blind hyperspectral unmixing"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "synthesize a scene with ground truth");
    generate->add_option("--bands", gen.bands, "spectral bands M")->check(CLI::PositiveNumber);
    generate->add_option("--pixels", gen.pixels, "pixel count L")->check(CLI::PositiveNumber);
    generate->add_option("--endmembers", gen.endmembers, "endmember count N")
        ->required()
        ->check(CLI::PositiveNumber);
    generate->add_option("--purity", gen.purity, "purity level in (1/sqrt(N), 1]");
    double snr_value = 0.0;
    auto* snr_opt = generate->add_option("--snr-db", snr_value, "SNR in dB; omit for noiseless");
    generate->add_option("--seed", gen.seed, "RNG seed");
    generate->add_option("--gamma", gen.gamma,
                         "Dirichlet parameters: one value or N comma-separated (default 1/N)");
    generate->add_option("--pattern", gen.pattern, "abundance pattern")
        ->check(CLI::IsMember({"iid", "block"}));
    generate->add_option("--spectra-file", gen.spectra_file, "CSV of M x N spectra to use");
    generate->add_option("-o,--output", gen.output, "output directory")->required();

    UnmixArgs um;
    auto* unmix_cmd = app.add_subcommand("unmix", "estimate endmembers and abundances");
    unmix_cmd->add_option("--data", um.data, "dataset file (binary or CSV)")->required();
    unmix_cmd->add_option("--endmembers", um.endmembers, "endmember count N")
        ->required()
        ->check(CLI::PositiveNumber);
    unmix_cmd->add_option("--eta", um.eta, "shift parameter in (0, 1]");
    unmix_cmd->add_flag("--no-shift", um.no_shift, "keep c = 1");
    unmix_cmd->add_option("--threads", um.threads,
                          "worker threads (default: HYPERCSI_THREADS or all cores)");
    unmix_cmd->add_option("-o,--output", um.output, "output directory")->required();

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "score estimates against ground truth");
    eval_cmd->add_option("--truth", ev.truth, "directory with spectra.csv + abundance.csv")
        ->required();
    eval_cmd->add_option("--est", ev.est, "directory with endmembers.csv + abundances.csv")
        ->required();
    eval_cmd->add_option("-o,--output", ev.output, "metrics JSON path");

    McArgs mc_args;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo sweep from a config file");
    mc_cmd->add_option("--sweep", mc_args.sweep, "sweep config file")->required();
    mc_cmd->add_option("-o,--output", mc_args.output, "results CSV path")->required();
    mc_cmd->add_option("--threads", mc_args.threads, "trial worker pool size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (generate->parsed()) {
            if (snr_opt->count() > 0) gen.snr_db = snr_value;
            return run_generate(gen);
        }
        if (unmix_cmd->parsed()) {
            if (!(um.eta > 0.0 && um.eta <= 1.0))
                throw InvalidParameter("--eta must lie in (0, 1]");
            return run_unmix(um);
        }
        if (eval_cmd->parsed()) return run_eval(ev);
        if (mc_cmd->parsed()) return run_mc(mc_args);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return classify(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
