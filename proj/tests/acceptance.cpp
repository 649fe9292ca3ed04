// Acceptance suite: ten end-to-end criteria, one pass/fail line each.
// Run all with no arguments, or a single criterion with --only N.
// --cli PATH points at the command-line binary for the determinism check.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "riskfs/experiment.hpp"
#include "riskfs/rng.hpp"
#include "testutil.hpp"

using namespace riskfs;
namespace tu = riskfs::testutil;

namespace {

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> run;
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// ---------------------------------------------------------------- criterion 1
bool loss_matrix_fidelity(std::string& detail) {
    const auto devices = tu::testbed_devices();
    const LossMatrix loss = build_default_loss(devices);
    const std::size_t n = devices.size();
    if (n != 15) {
        detail = "expected 15 devices";
        return false;
    }

    // cross-brand same-type camera pair (D-Link vs TP-Link), ids 2 and 11
    if (loss(2, 11) != 1.0) {
        detail = "cross-brand same-type loss != 1";
        return false;
    }
    // same-brand cross-type pair (TP-Link camera vs TP-Link bulb), ids 11 and 10
    if (loss(11, 10) != 2.0) {
        detail = "same-brand cross-type loss != 2";
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (loss(i, i) != 0.0) {
            detail = "nonzero diagonal";
            return false;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = loss(i, j);
            if (v != 0.0 && v != 1.0 && v != 2.0 && v != 3.0) {
                detail = "entry outside {0,1,2,3}";
                return false;
            }
            if (v != loss(j, i)) {
                detail = "asymmetric entry";
                return false;
            }
        }
    }
    detail = "15x15 matrix, worked examples and structure verified";
    return true;
}

// ---------------------------------------------------------------- criterion 2
bool risk_formula_oracle(std::string& detail) {
    Rng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.below(19); // n <= 20
        MisclassMatrix probs;
        probs.probs = Matrix(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += probs.probs(i, j) = rng.uniform01() + 1e-6;
            for (std::size_t i = 0; i < n; ++i) probs.probs(i, j) /= sum;
        }
        LossMatrix loss;
        loss.values = Matrix(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) loss.values(i, j) = 4.0 * rng.uniform01();

        // independent evaluation: explicit loops, truth class outer
        double naive = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) naive += probs(i, j) * loss(i, j);

        worst = std::max(worst, std::abs(risk_score(probs, loss) - naive));
        if (worst > 1e-12) {
            detail = "difference " + std::to_string(worst) + " exceeds 1e-12";
            return false;
        }
    }
    detail = "1000 random pairs, max |engine - oracle| = " + std::to_string(worst);
    return true;
}

// ---------------------------------------------------------------- criterion 3
bool budget_feasibility(std::string& detail) {
    Rng rng(33);
    std::size_t invocations = 0;
    std::size_t feasible = 0;
    const std::array<const char*, 5> names = {"brute", "cga", "rga", "vga", "ce"};

    for (int instance = 0; instance < 42 && invocations < 1050; ++instance) {
        SynthSpec spec;
        spec.n_devices = 2 + rng.below(2);
        spec.m_features = 4 + rng.below(4);
        spec.n_informative = 1 + rng.below(spec.m_features);
        spec.rows_per_device = 10;
        spec.class_separation = 1.0 + 3.0 * rng.uniform01();
        spec.seed = 9000 + static_cast<std::uint64_t>(instance);
        SynthData data = generate(spec);
        // random positive costs, decoupled from the generator's cycle
        for (auto& c : data.costs.costs) c = 0.5 + 2.5 * rng.uniform01();
        const LossMatrix loss = build_default_loss(data.dataset.devices);
        const Split split = stratified_split(data.dataset, 0.7, spec.seed);

        const double total = data.costs.total();
        const std::array<double, 5> budgets = {0.0, total, 0.3 * total, 0.7 * total,
                                               total * rng.uniform01()};
        for (const double budget : budgets) {
            for (const char* name : names) {
                CEConfig ce;
                ce.eta = 16;
                ce.t_max = 6;
                ce.seed = spec.seed;
                const SelectionResult result = run_selector(
                    name, data.dataset, split, data.costs, loss, budget, {}, ce);
                ++invocations;
                if (result.report.total_cost <= budget) ++feasible;
            }
        }
    }
    detail = std::to_string(feasible) + "/" + std::to_string(invocations) +
             " returned selections within budget";
    return invocations >= 1000 && feasible == invocations;
}

// Shared family for criteria 4 and 5: n=4 devices, m=10, 40 rows each.
SynthSpec oracle_family_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.n_devices = 4;
    spec.m_features = 10;
    spec.n_informative = 4;
    spec.rows_per_device = 40;
    spec.class_separation = 2.0;
    spec.noise_std = 1.0;
    spec.seed = seed;
    return spec;
}

// ---------------------------------------------------------------- criterion 4
bool brute_force_dominance(std::string& detail) {
    int dominated = 0;
    const int n_instances = 50;
    for (int k = 0; k < n_instances; ++k) {
        const SynthSpec spec = oracle_family_spec(4000 + static_cast<std::uint64_t>(k));
        const SynthData data = generate(spec);
        const LossMatrix loss = build_default_loss(data.dataset.devices);
        const Split split = stratified_split(data.dataset, 0.7, spec.seed);
        const double budget = 0.5 * data.costs.total();

        const double brute_risk =
            select_brute_force(data.dataset, split, data.costs, loss, budget, {}).report.risk;
        bool ok = true;
        for (const GreedyKey key : {GreedyKey::cost, GreedyKey::risk, GreedyKey::value}) {
            const double greedy_risk =
                select_greedy(data.dataset, split, data.costs, loss, budget, {}, key).report.risk;
            if (brute_risk > greedy_risk) ok = false;
        }
        if (ok) ++dominated;
    }
    detail = std::to_string(dominated) + "/" + std::to_string(n_instances) +
             " instances dominated by brute force";
    return dominated == n_instances;
}

// ---------------------------------------------------------------- criterion 5
bool ce_near_optimality(std::string& detail) {
    int hits = 0;
    const int n_seeds = 20;
    for (int k = 0; k < n_seeds; ++k) {
        const SynthSpec spec = oracle_family_spec(5000 + static_cast<std::uint64_t>(k));
        const SynthData data = generate(spec);
        const LossMatrix loss = build_default_loss(data.dataset.devices);
        const Split split = stratified_split(data.dataset, 0.7, spec.seed);
        const double budget = 0.5 * data.costs.total();

        const double brute_risk =
            select_brute_force(data.dataset, split, data.costs, loss, budget, {}).report.risk;

        CEConfig ce;
        ce.eta = 500;
        ce.t_max = 100;
        ce.rho = 0.9;
        ce.alpha = 0.7;
        ce.beta = 0.5;
        ce.seed = spec.seed;
        const double ce_risk =
            select_cross_entropy(data.dataset, split, data.costs, loss, budget, {}, ce)
                .report.risk;

        const double target = brute_risk == 0.0 ? 0.01 : 1.05 * brute_risk;
        if (ce_risk <= target) ++hits;
    }
    detail = std::to_string(hits) + "/" + std::to_string(n_seeds) +
             " seeds within 1.05x of the enumerated optimum (threshold 18)";
    return hits >= 18;
}

// ---------------------------------------------------------------- criterion 6
bool ce_vs_vga(std::string& detail) {
    const int n_seeds = 20;
    std::vector<double> ce_risks;
    std::vector<double> vga_risks;
    for (int k = 0; k < n_seeds; ++k) {
        SynthSpec spec;
        spec.n_devices = 4;
        spec.m_features = 40;
        spec.n_informative = 10;
        spec.rows_per_device = 40;
        spec.class_separation = 2.5;
        spec.seed = 6000 + static_cast<std::uint64_t>(k);
        const SynthData data = generate(spec);
        const LossMatrix loss = build_default_loss(data.dataset.devices);
        const Split split = stratified_split(data.dataset, 0.7, spec.seed);
        const double budget = 0.3 * data.costs.total();

        CEConfig ce;
        ce.eta = 500;
        ce.t_max = 100;
        ce.seed = spec.seed;
        ce_risks.push_back(
            select_cross_entropy(data.dataset, split, data.costs, loss, budget, {}, ce)
                .report.risk);
        vga_risks.push_back(
            select_greedy(data.dataset, split, data.costs, loss, budget, {}, GreedyKey::value)
                .report.risk);
    }

    const auto mean = [](const std::vector<double>& xs) {
        double sum = 0.0;
        for (const double x : xs) sum += x;
        return sum / static_cast<double>(xs.size());
    };
    const auto stddev = [&](const std::vector<double>& xs) {
        const double mu = mean(xs);
        double ss = 0.0;
        for (const double x : xs) ss += (x - mu) * (x - mu);
        return std::sqrt(ss / static_cast<double>(xs.size()));
    };

    const double ce_mean = mean(ce_risks);
    const double vga_mean = mean(vga_risks);
    const double ce_sd = stddev(ce_risks);
    const double vga_sd = stddev(vga_risks);
    std::ostringstream text;
    text << "mean CE " << ce_mean << " vs VGA " << vga_mean << "; sd CE " << ce_sd << " vs VGA "
         << vga_sd;
    detail = text.str();
    return ce_mean <= vga_mean && ce_sd <= vga_sd;
}

// ---------------------------------------------------------------- criterion 7
bool unconstrained_greedy_equivalence(std::string& detail) {
    SynthSpec spec;
    spec.n_devices = 3;
    spec.m_features = 12;
    spec.n_informative = 5;
    spec.rows_per_device = 20;
    spec.seed = 77;
    const SynthData data = generate(spec);
    const LossMatrix loss = build_default_loss(data.dataset.devices);
    const Split split = stratified_split(data.dataset, 0.7, 77);
    const double budget = data.costs.total(); // lambda = sum of costs

    std::array<SelectionResult, 3> results = {
        select_greedy(data.dataset, split, data.costs, loss, budget, {}, GreedyKey::cost),
        select_greedy(data.dataset, split, data.costs, loss, budget, {}, GreedyKey::risk),
        select_greedy(data.dataset, split, data.costs, loss, budget, {}, GreedyKey::value),
    };
    for (const auto& result : results) {
        if (result.selection.count() != spec.m_features) {
            detail = result.selector_name + " did not select all features";
            return false;
        }
        if (result.report.risk != results[0].report.risk) {
            detail = "risk differs between greedy selectors";
            return false;
        }
    }
    detail = "CGA, RGA, VGA all selected the full mask with identical risk";
    return true;
}

// ---------------------------------------------------------------- criterion 8
bool scaling_behavior(std::string& detail) {
    // CE at fixed eta and t_max, convergence stop disabled: doubling m must
    // grow wall time by less than 2.5x.
    const auto ce_time = [](std::size_t m) {
        SynthSpec spec;
        spec.n_devices = 4;
        spec.m_features = m;
        spec.n_informative = 8;
        spec.rows_per_device = 40;
        spec.seed = 808;
        const SynthData data = generate(spec);
        const LossMatrix loss = build_default_loss(data.dataset.devices);
        const Split split = stratified_split(data.dataset, 0.7, 808);

        CEConfig ce;
        ce.eta = 200;
        ce.t_max = 10;
        ce.epsilon_converge = 0.0; // force all iterations
        ce.seed = 808;
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 2; ++rep) {
            const double start = now_seconds();
            select_cross_entropy(data.dataset, split, data.costs, loss,
                                 std::numeric_limits<double>::infinity(), {}, ce);
            best = std::min(best, now_seconds() - start);
        }
        return best;
    };

    // Brute force on a tiny instance: m 10 -> 20 must grow by >= 100x.
    const auto brute_time = [](std::size_t m) {
        SynthSpec spec;
        spec.n_devices = 2;
        spec.m_features = m;
        spec.n_informative = 3;
        spec.rows_per_device = 10;
        spec.seed = 809;
        const SynthData data = generate(spec);
        const LossMatrix loss = build_default_loss(data.dataset.devices);
        const Split split = stratified_split(data.dataset, 0.7, 809);
        const double start = now_seconds();
        select_brute_force(data.dataset, split, data.costs, loss,
                           std::numeric_limits<double>::infinity(), {});
        return now_seconds() - start;
    };

    const double ce40 = ce_time(40);
    const double ce80 = ce_time(80);
    const double ce_ratio = ce80 / ce40;

    const double brute10 = brute_time(10);
    const double brute20 = brute_time(20);
    const double brute_ratio = brute20 / brute10;

    std::ostringstream text;
    text << "CE m=40->80 ratio " << ce_ratio << " (< 2.5); brute m=10->20 ratio " << brute_ratio
         << " (>= 100)";
    detail = text.str();
    return ce_ratio < 2.5 && brute_ratio >= 100.0;
}

// ---------------------------------------------------------------- criterion 9
bool classifier_sanity(std::string& detail) {
    SynthSpec spec;
    spec.n_devices = 4;
    spec.m_features = 8;
    spec.n_informative = 4;
    spec.rows_per_device = 40;
    spec.class_separation = 10.0;
    spec.noise_std = 1.0;
    spec.seed = 909;
    const SynthData data = generate(spec);
    const LossMatrix loss = build_default_loss(data.dataset.devices);
    const Split split = stratified_split(data.dataset, 0.7, 909);

    std::vector<std::size_t> test_counts(data.dataset.n_classes(), 0);
    for (const std::size_t r : split.test_rows)
        ++test_counts[static_cast<std::size_t>(data.dataset.labels[r])];

    double tree_f1 = 0.0;
    double gnb_f1 = 0.0;
    for (const ClassifierKind kind : {ClassifierKind::decision_tree, ClassifierKind::gaussian_nb}) {
        ClassifierConfig config;
        config.kind = kind;
        const RiskReport report =
            evaluate_selection(data.dataset, split, SelectionVector::ones(spec.m_features),
                               data.costs, loss, config);
        (kind == ClassifierKind::decision_tree ? tree_f1 : gnb_f1) = report.macro_f1;
        for (std::size_t j = 0; j < data.dataset.n_classes(); ++j) {
            if (report.confusion.column_sum(j) != static_cast<std::int64_t>(test_counts[j])) {
                detail = "confusion column sums do not match test counts";
                return false;
            }
        }
    }
    std::ostringstream text;
    text << "macro F1: tree " << tree_f1 << ", gnb " << gnb_f1 << " (threshold 0.95)";
    detail = text.str();
    return tree_f1 >= 0.95 && gnb_f1 >= 0.95;
}

// --------------------------------------------------------------- criterion 10
std::string cli_path; // set from --cli

std::string strip_timing_column(const std::string& csv_text) {
    // wall_time_ms is column index 11 in the results schema
    std::istringstream in(csv_text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t start = 0;
        int column = 0;
        while (start <= line.size()) {
            const std::size_t comma = line.find(',', start);
            const std::string cell = comma == std::string::npos
                                         ? line.substr(start)
                                         : line.substr(start, comma - start);
            if (column != 11) out << cell << ',';
            if (comma == std::string::npos) break;
            start = comma + 1;
            ++column;
        }
        out << '\n';
    }
    return out.str();
}

bool determinism(std::string& detail) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "riskfs_acceptance";
    fs::create_directories(dir);

    const auto read_file = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream text;
        text << in.rdbuf();
        return text.str();
    };

    if (!cli_path.empty()) {
        const std::string out1 = (dir / "sweep1.csv").string();
        const std::string out2 = (dir / "sweep2.csv").string();
        const std::string base =
            "\"" + cli_path + "\" sweep --synth --n-devices 3 --m-features 8 --n-informative 4"
            " --rows-per-device 12 --synth-seed 4 --selector cga,vga,ce --budget 4,8"
            " --prefixes 4,8 --seed 1,2 --eta 20 --tmax 5 --out ";
        if (std::system((base + "\"" + out1 + "\"").c_str()) != 0 ||
            std::system((base + "\"" + out2 + "\"").c_str()) != 0) {
            detail = "CLI invocation failed";
            return false;
        }
        const std::string first = strip_timing_column(read_file(out1));
        const std::string second = strip_timing_column(read_file(out2));
        detail = "two CLI sweep runs, non-timing columns byte-identical";
        if (first.empty() || first != second) {
            detail = "CLI sweep outputs differ";
            return false;
        }
        return true;
    }

    // fallback without a CLI binary: library-level sweep twice
    SynthSpec spec;
    spec.n_devices = 3;
    spec.m_features = 8;
    spec.n_informative = 4;
    spec.rows_per_device = 12;
    spec.seed = 4;
    SynthData data = generate(spec);
    DataBundle bundle;
    bundle.dataset = std::move(data.dataset);
    bundle.costs = std::move(data.costs);
    bundle.loss = build_default_loss(bundle.dataset.devices);
    ExperimentPlan plan;
    plan.selectors = {"cga", "vga", "ce"};
    plan.budgets = {4.0, 8.0};
    plan.prefix_lengths = {4, 8};
    plan.seeds = {1, 2};
    plan.ce.eta = 20;
    plan.ce.t_max = 5;

    std::ostringstream text1;
    std::ostringstream text2;
    write_results_csv(text1, run_sweep(plan, bundle));
    write_results_csv(text2, run_sweep(plan, bundle));
    detail = "two library sweep runs, non-timing columns byte-identical";
    return strip_timing_column(text1.str()) == strip_timing_column(text2.str());
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int a = 1; a < argc; ++a) {
        const std::string arg = argv[a];
        if (arg == "--only" && a + 1 < argc) only = std::atoi(argv[++a]);
        if (arg == "--cli" && a + 1 < argc) cli_path = argv[++a];
    }

    const std::vector<Criterion> criteria = {
        {1, "loss-matrix fidelity", loss_matrix_fidelity},
        {2, "risk formula oracle", risk_formula_oracle},
        {3, "budget feasibility", budget_feasibility},
        {4, "brute-force oracle dominance", brute_force_dominance},
        {5, "CE near-optimality", ce_near_optimality},
        {6, "CE vs VGA replication", ce_vs_vga},
        {7, "unconstrained greedy equivalence", unconstrained_greedy_equivalence},
        {8, "scaling behavior", scaling_behavior},
        {9, "classifier sanity", classifier_sanity},
        {10, "determinism", determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (only != 0 && criterion.number != only) continue;
        const double start = now_seconds();
        std::string detail;
        bool passed = false;
        try {
            passed = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed = now_seconds() - start;
        std::ostringstream line;
        line << (passed ? "PASS" : "FAIL") << " criterion " << criterion.number << " ("
             << criterion.name << "): " << detail << " [" << elapsed << " s]";
        std::cout << line.str() << std::endl;
        if (!passed) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
