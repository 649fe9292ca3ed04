#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskfs/csv.hpp"
#include "riskfs/experiment.hpp"

namespace {

using namespace riskfs;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    return in;
}

// "-" selects standard input.
std::istream& input_or_stdin(const std::string& path, std::optional<std::ifstream>& holder) {
    if (path == "-") return std::cin;
    holder.emplace(open_input(path));
    return *holder;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    return out;
}

// Dataset/cost/loss sources shared by run, sweep, and rank: either the three
// CSV paths or a synthetic instance generated in-process.
struct DataOptions {
    std::string features_path;
    std::string devices_path;
    std::string costs_path;
    std::string loss_path;

    bool use_synth = false;
    SynthSpec synth;

    DataBundle load() const {
        DataBundle bundle;
        if (use_synth) {
            SynthData data = generate(synth);
            bundle.dataset = std::move(data.dataset);
            bundle.costs = std::move(data.costs);
        } else {
            if (features_path.empty() || devices_path.empty())
                throw std::runtime_error("--features and --devices are required without --synth");
            std::optional<std::ifstream> features_file;
            std::optional<std::ifstream> devices_file;
            auto devices = load_devices(input_or_stdin(devices_path, devices_file));
            bundle.dataset = load_dataset(input_or_stdin(features_path, features_file),
                                          std::move(devices));
            if (costs_path.empty())
                throw std::runtime_error("--costs is required without --synth");
            auto costs = open_input(costs_path);
            bundle.costs = load_costs(costs, bundle.dataset.feature_names);
        }
        if (!loss_path.empty()) {
            auto loss = open_input(loss_path);
            bundle.loss = load_loss(loss, bundle.dataset.devices);
        } else {
            bundle.loss = build_default_loss(bundle.dataset.devices);
        }
        return bundle;
    }
};

void add_data_options(CLI::App& cmd, DataOptions& data) {
    cmd.add_option("--features", data.features_path, "features.csv path (or - for stdin)");
    cmd.add_option("--devices", data.devices_path, "devices.csv path");
    cmd.add_option("--costs", data.costs_path, "costs.csv path");
    cmd.add_option("--loss", data.loss_path, "loss.csv path (default: type/brand rule)");
    cmd.add_flag("--synth", data.use_synth, "generate a synthetic instance instead of loading");
    cmd.add_option("--n-devices", data.synth.n_devices, "synthetic device count");
    cmd.add_option("--m-features", data.synth.m_features, "synthetic feature count");
    cmd.add_option("--n-informative", data.synth.n_informative, "informative feature count");
    cmd.add_option("--rows-per-device", data.synth.rows_per_device, "rows per device");
    cmd.add_option("--separation", data.synth.class_separation, "class mean separation");
    cmd.add_option("--noise", data.synth.noise_std, "noise standard deviation");
    cmd.add_option("--synth-seed", data.synth.seed, "synthetic generator seed");
}

void add_ce_options(CLI::App& cmd, CEConfig& ce) {
    cmd.add_option("--eta", ce.eta, "CE samples per iteration");
    cmd.add_option("--tmax", ce.t_max, "CE iteration cap");
    cmd.add_option("--rho", ce.rho, "CE elite-quantile parameter");
    cmd.add_option("--alpha", ce.alpha, "CE smoothing rate");
    cmd.add_option("--beta", ce.beta, "CE decision threshold");
    cmd.add_option("--epsilon", ce.epsilon_converge, "CE convergence tolerance");
}

void add_classifier_options(CLI::App& cmd, std::string& classifier, ClassifierConfig& config) {
    cmd.add_option("--classifier", classifier, "classifier: tree | gnb")
        ->default_str("tree");
    cmd.add_option("--tree-max-depth", config.max_depth, "decision tree depth cap");
    cmd.add_option("--tree-min-split", config.min_split, "decision tree minimum node size");
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        auto out = open_output(path);
        out << text;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budget-constrained feature selection by misclassification risk"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file; keys are flag names under a [subcommand] section");

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "run one selector once");
    run_cmd->fallthrough(true);
    DataOptions run_data;
    std::string run_selector = "ce";
    std::string run_classifier = "tree";
    double run_budget = std::numeric_limits<double>::infinity();
    std::uint64_t run_seed = 0;
    double run_train_frac = 0.7;
    std::string run_out;
    std::string run_json;
    std::string run_trace;
    ExperimentPlan run_plan;
    add_data_options(*run_cmd, run_data);
    add_classifier_options(*run_cmd, run_classifier, run_plan.classifier);
    add_ce_options(*run_cmd, run_plan.ce);
    run_cmd->add_option("--selector", run_selector, "ce | brute | cga | rga | vga");
    run_cmd->add_option("--budget", run_budget, "feature budget (default: unbounded)");
    run_cmd->add_option("--seed", run_seed, "split and CE seed");
    run_cmd->add_option("--train-frac", run_train_frac, "training fraction");
    run_cmd->add_option("--brute-limit", run_plan.brute_m_limit, "brute-force feature cap");
    run_cmd->add_option("--out", run_out, "results CSV path (default: stdout)");
    run_cmd->add_option("--json", run_json, "risk report JSON path");
    run_cmd->add_option("--trace-out", run_trace, "CE trace JSON-lines path");

    // --- sweep -------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "run a (m, budget, selector, seed) grid");
    sweep_cmd->fallthrough(true);
    DataOptions sweep_data;
    std::string sweep_classifier = "tree";
    std::string sweep_rank_scheme = "single_risk";
    std::string sweep_out;
    std::string sweep_diff_out;
    ExperimentPlan sweep_plan;
    add_data_options(*sweep_cmd, sweep_data);
    add_classifier_options(*sweep_cmd, sweep_classifier, sweep_plan.classifier);
    add_ce_options(*sweep_cmd, sweep_plan.ce);
    sweep_cmd->add_option("--selector", sweep_plan.selectors, "selectors to run")
        ->delimiter(',');
    sweep_cmd->add_option("--budget", sweep_plan.budgets, "budgets to sweep")->delimiter(',');
    sweep_cmd->add_option("--prefixes", sweep_plan.prefix_lengths,
                          "ranked-feature prefix lengths (default: full set)")
        ->delimiter(',');
    sweep_cmd->add_option("--seed", sweep_plan.seeds, "seeds to sweep")->delimiter(',');
    sweep_cmd->add_option("--train-frac", sweep_plan.train_fraction, "training fraction");
    sweep_cmd->add_option("--rank-scheme", sweep_rank_scheme, "single_risk | file");
    sweep_cmd->add_option("--rank-file", sweep_plan.rank_file, "feature ordering file");
    sweep_cmd->add_option("--workers", sweep_plan.workers, "concurrent sweep cells");
    sweep_cmd->add_option("--brute-limit", sweep_plan.brute_m_limit, "brute-force feature cap");
    sweep_cmd->add_option("--out", sweep_out, "results CSV path (default: stdout)");
    sweep_cmd->add_option("--diff-out", sweep_diff_out, "CE minus VGA difference CSV path");

    // --- synth -------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic dataset to disk");
    synth_cmd->fallthrough(true);
    SynthSpec synth_spec;
    std::string synth_dir = ".";
    synth_cmd->add_option("--out-dir", synth_dir, "output directory");
    synth_cmd->add_option("--n-devices", synth_spec.n_devices, "device count");
    synth_cmd->add_option("--m-features", synth_spec.m_features, "feature count");
    synth_cmd->add_option("--n-informative", synth_spec.n_informative, "informative features");
    synth_cmd->add_option("--rows-per-device", synth_spec.rows_per_device, "rows per device");
    synth_cmd->add_option("--separation", synth_spec.class_separation, "class mean separation");
    synth_cmd->add_option("--noise", synth_spec.noise_std, "noise standard deviation");
    synth_cmd->add_option("--seed", synth_spec.seed, "generator seed");

    // --- rank --------------------------------------------------------------
    auto* rank_cmd = app.add_subcommand("rank", "emit a feature ordering");
    rank_cmd->fallthrough(true);
    DataOptions rank_data;
    std::string rank_classifier = "tree";
    std::string rank_scheme = "single_risk";
    std::string rank_file;
    std::string rank_out;
    std::uint64_t rank_seed = 0;
    double rank_train_frac = 0.7;
    ClassifierConfig rank_config;
    add_data_options(*rank_cmd, rank_data);
    add_classifier_options(*rank_cmd, rank_classifier, rank_config);
    rank_cmd->add_option("--rank-scheme", rank_scheme, "single_risk | file");
    rank_cmd->add_option("--rank-file", rank_file, "feature ordering file");
    rank_cmd->add_option("--seed", rank_seed, "split seed");
    rank_cmd->add_option("--train-frac", rank_train_frac, "training fraction");
    rank_cmd->add_option("--out", rank_out, "output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            run_plan.classifier.kind = parse_classifier_kind(run_classifier);
            run_plan.selectors = {run_selector};
            run_plan.budgets = {run_budget};
            run_plan.seeds = {run_seed};
            run_plan.train_fraction = run_train_frac;
            const DataBundle bundle = run_data.load();
            run_plan.validate(bundle.dataset.n_features());

            const SelectionResult result = run_single(bundle, run_selector, run_budget, run_plan);
            std::vector<SweepRow> rows = {result_to_row(
                result, classifier_name(run_plan.classifier.kind),
                bundle.dataset.n_features(), run_budget, run_seed)};
            std::ostringstream csv_text;
            write_results_csv(csv_text, rows);
            write_or_print(run_out, csv_text.str());
            if (!run_json.empty()) write_or_print(run_json, report_to_json(result.report) + "\n");
            if (!run_trace.empty() && result.trace)
                write_or_print(run_trace, trace_to_jsonl(*result.trace));
        } else if (sweep_cmd->parsed()) {
            sweep_plan.classifier.kind = parse_classifier_kind(sweep_classifier);
            sweep_plan.rank_scheme = parse_rank_scheme(sweep_rank_scheme);
            if (sweep_plan.budgets.empty())
                sweep_plan.budgets = {std::numeric_limits<double>::infinity()};
            if (sweep_plan.seeds.empty()) sweep_plan.seeds = {0};
            const DataBundle bundle = sweep_data.load();

            const std::vector<SweepRow> rows = run_sweep(sweep_plan, bundle);
            std::ostringstream csv_text;
            write_results_csv(csv_text, rows);
            write_or_print(sweep_out, csv_text.str());
            if (!sweep_diff_out.empty()) {
                const std::vector<DiffRow> diffs = diff_ce_vga(rows);
                std::ostringstream diff_text;
                write_diff_csv(diff_text, diffs);
                write_or_print(sweep_diff_out, diff_text.str());
            }
        } else if (synth_cmd->parsed()) {
            const SynthData data = generate(synth_spec);
            std::filesystem::create_directories(synth_dir);
            const auto dir = std::filesystem::path(synth_dir);
            {
                auto out = open_output((dir / "features.csv").string());
                write_features_csv(out, data.dataset);
            }
            {
                auto out = open_output((dir / "devices.csv").string());
                write_devices_csv(out, data.dataset.devices);
            }
            {
                auto out = open_output((dir / "costs.csv").string());
                out << "feature,cost\n";
                for (std::size_t c = 0; c < data.dataset.n_features(); ++c)
                    out << data.dataset.feature_names[c] << ','
                        << riskfs::csv::format_double(data.costs[c]) << '\n';
            }
            std::cout << "wrote features.csv, devices.csv, costs.csv to " << synth_dir << "\n";
        } else if (rank_cmd->parsed()) {
            rank_config.kind = parse_classifier_kind(rank_classifier);
            const DataBundle bundle = rank_data.load();
            const Split split = stratified_split(bundle.dataset, rank_train_frac, rank_seed);

            std::vector<std::size_t> order;
            if (parse_rank_scheme(rank_scheme) == RankScheme::file) {
                auto in = open_input(rank_file);
                order = rank_features(bundle.dataset, split, bundle.costs, bundle.loss,
                                      rank_config, RankScheme::file, &in);
            } else {
                order = rank_features(bundle.dataset, split, bundle.costs, bundle.loss,
                                      rank_config, RankScheme::single_risk);
            }
            std::ostringstream text;
            for (const std::size_t k : order) text << bundle.dataset.feature_names[k] << '\n';
            write_or_print(rank_out, text.str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
