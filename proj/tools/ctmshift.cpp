#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctm/detector.hpp"
#include "ctm/ecdf.hpp"
#include "ctm/io.hpp"
#include "ctm/sim.hpp"

namespace {

// Exit codes: 0 completed (no rejection), 2 data/config error, 3 rejected.
constexpr int kExitOk = 0;
constexpr int kExitError = 2;
constexpr int kExitRejected = 3;

constexpr std::uint64_t kDefaultSeed = 12345;

struct MonitorArgs {
    std::string ref_path;
    std::string score_path = "-";
    double alpha = 0.05;
    double delta = 0.1;
    double k = 1e-6;
    double clip = 0.1;
    std::uint64_t warmup = 50;
    std::string variant = "conditional";
    std::uint64_t seed = kDefaultSeed;
    std::string format = "csv";
    bool stop_on_reject = false;
};

int run_monitor(const MonitorArgs& args) {
    const auto variant = ctm::parse_variant(args.variant);
    if (!variant) {
        std::cerr << "error: unknown variant '" << args.variant << "'\n";
        return kExitError;
    }
    ctm::DetectorConfig cfg;
    cfg.alpha = args.alpha;
    cfg.delta = args.delta;
    cfg.k = args.k;
    cfg.clip = args.clip;
    cfg.warmup = args.warmup;
    cfg.variant = *variant;

    const ctm::RecordFormat fmt =
        args.format == "jsonl" ? ctm::RecordFormat::jsonl : ctm::RecordFormat::csv;

    std::vector<double> ref_scores;
    try {
        ref_scores = ctm::read_score_file(args.ref_path);
        if (ref_scores.empty()) {
            std::cerr << "error: reference file has no scores: " << args.ref_path << "\n";
            return kExitError;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }

    std::ifstream score_file;
    std::istream* scores = &std::cin;
    if (args.score_path != "-") {
        score_file.open(args.score_path);
        if (!score_file) {
            std::cerr << "error: cannot open score file: " << args.score_path << "\n";
            return kExitError;
        }
        scores = &score_file;
    }

    try {
        ctm::Detector det(ref_scores, cfg, args.seed);
        if (fmt == ctm::RecordFormat::csv) std::cout << ctm::run_record_csv_header() << '\n';

        std::string line;
        std::size_t line_no = 0;
        bool rejected = false;
        while (std::getline(*scores, line)) {
            ++line_no;
            const auto score = ctm::parse_score_line(line, line_no);
            if (!score) continue;
            const ctm::StepOutcome out = det.step(*score);
            const ctm::RunRecord rec{det.time(), *score,        out.p_value, out.eta,
                                     out.bet_factor, out.wealth, out.reject};
            std::cout << ctm::format_run_record(rec, fmt) << '\n';
            rejected = rejected || out.reject;
            if (rejected && args.stop_on_reject) break;
        }
        return rejected ? kExitRejected : kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int run_simulate(const std::string& config_path, const std::string& out_dir, int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
    try {
        const ctm::SimSpec spec = ctm::load_sim_config(config_path);

        ctm::TrialOptions opts;
        opts.n_ref = spec.n_ref;
        opts.record_paths = false;
        opts.compute_regret = spec.compute_regret;
        opts.paired = spec.paired;

        std::vector<std::string> names;
        std::vector<ctm::PowerCurve> curves;
        std::vector<ctm::StoppingSummary> summaries;
        for (const ctm::Variant v : spec.variants) {
            ctm::DetectorConfig cfg = spec.base;
            cfg.variant = v;
            const auto trials =
                ctm::run_trials(spec.scenario, cfg, opts, spec.seed, spec.trials);
            names.emplace_back(ctm::variant_name(v));
            curves.push_back(ctm::aggregate_power(trials));
            summaries.push_back(ctm::summarize_stopping(trials, spec.scenario.horizon));
        }

        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        {
            std::ofstream out(fs::path(out_dir) / "power.csv");
            ctm::write_power_csv(out, names, curves);
        }
        {
            std::ofstream out(fs::path(out_dir) / "summary.csv");
            ctm::write_summary_csv(out, names, summaries);
        }
        {
            std::ofstream out(fs::path(out_dir) / "manifest.txt");
            ctm::write_manifest(out, spec);
        }
        std::cout << "wrote " << out_dir << "/power.csv, summary.csv, manifest.txt\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int run_bands(std::uint64_t n, double delta) {
    try {
        std::printf("%.6f\n", ctm::dkw_half_width(n, delta));
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential distribution-shift detection on score streams"};
    app.require_subcommand(1);

    MonitorArgs margs;
    auto* monitor = app.add_subcommand(
        "monitor", "Run a detector over a score stream and emit one record per score");
    monitor->add_option("--ref", margs.ref_path, "Reference score file, one score per line")
        ->required();
    monitor->add_option("--scores", margs.score_path,
                        "Score file, one score per line ('-' for stdin)");
    monitor->add_option("--alpha", margs.alpha, "Test level");
    monitor->add_option("--delta", margs.delta, "Confidence-band level");
    monitor->add_option("--k", margs.k, "Bet smoothing constant");
    monitor->add_option("--clip", margs.clip, "Clipping threshold (0 disables)");
    monitor->add_option("--warmup", margs.warmup, "Steps that update state but never bet");
    monitor->add_option("--variant", margs.variant, "conditional|standard|invalid");
    monitor->add_option("--seed", margs.seed, "RNG seed for randomized p-values");
    monitor->add_option("--format", margs.format, "csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    monitor->add_flag("--stop-on-reject", margs.stop_on_reject,
                      "Stop emitting records at the first rejection");

    std::string config_path, out_dir = ".";
    int threads = 0;
    auto* simulate =
        app.add_subcommand("simulate", "Run a synthetic experiment from a config file");
    simulate->add_option("--config", config_path, "Flat key-value experiment config")
        ->required();
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--threads", threads, "OpenMP thread count (0 = default)");

    std::uint64_t band_n = 0;
    double band_delta = 0.1;
    auto* bands = app.add_subcommand("bands", "Print the DKW band half-width");
    bands->add_option("--n", band_n, "Reference set size")->required();
    bands->add_option("--delta", band_delta, "Confidence level")->required();

    CLI11_PARSE(app, argc, argv);

    if (monitor->parsed()) return run_monitor(margs);
    if (simulate->parsed()) return run_simulate(config_path, out_dir, threads);
    if (bands->parsed()) return run_bands(band_n, band_delta);
    return kExitError;
}
