#include "riskfs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "riskfs/csv.hpp"

namespace riskfs {

void ExperimentPlan::validate(std::size_t m) const {
    if (selectors.empty()) throw std::invalid_argument("plan: at least one selector required");
    for (const auto& s : selectors)
        if (s != "ce" && s != "brute" && s != "cga" && s != "rga" && s != "vga")
            throw std::invalid_argument("plan: unknown selector \"" + s + "\"");
    if (budgets.empty()) throw std::invalid_argument("plan: at least one budget required");
    for (const double b : budgets)
        if (b < 0.0) throw std::invalid_argument("plan: budgets must be nonnegative");
    for (const std::size_t p : prefix_lengths)
        if (p == 0 || p > m)
            throw std::invalid_argument("plan: prefix length " + std::to_string(p) +
                                        " out of range for " + std::to_string(m) + " features");
    if (seeds.empty()) throw std::invalid_argument("plan: at least one seed required");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("plan: train fraction must be in (0, 1)");
    if (workers == 0) throw std::invalid_argument("plan: workers must be positive");
}

std::vector<std::size_t> plan_ranking(const ExperimentPlan& plan, const DataBundle& bundle) {
    if (plan.rank_scheme == RankScheme::file) {
        std::ifstream in(plan.rank_file);
        if (!in) throw std::runtime_error("cannot open ranking file \"" + plan.rank_file + "\"");
        return rank_features(bundle.dataset, {}, bundle.costs, bundle.loss, plan.classifier,
                             RankScheme::file, &in);
    }
    const Split split =
        stratified_split(bundle.dataset, plan.train_fraction, plan.seeds.front());
    return rank_features(bundle.dataset, split, bundle.costs, bundle.loss, plan.classifier,
                         RankScheme::single_risk);
}

DataBundle restrict_to_prefix(const DataBundle& bundle, std::span<const std::size_t> ranking,
                              std::size_t prefix) {
    if (prefix > ranking.size())
        throw std::invalid_argument("prefix exceeds ranked feature count");

    DataBundle out;
    out.loss = bundle.loss;
    out.dataset.devices = bundle.dataset.devices;
    out.dataset.labels = bundle.dataset.labels;

    const auto& src = bundle.dataset;
    out.dataset.features = Matrix(src.n_rows(), prefix);
    for (std::size_t j = 0; j < prefix; ++j) {
        const std::size_t c = ranking[j];
        out.dataset.feature_names.push_back(src.feature_names[c]);
        out.costs.costs.push_back(bundle.costs[c]);
        for (std::size_t r = 0; r < src.n_rows(); ++r)
            out.dataset.features(r, j) = src.features(r, c);
    }
    return out;
}

SelectionResult run_single(const DataBundle& bundle, const std::string& selector, double budget,
                           const ExperimentPlan& plan) {
    const Split split =
        stratified_split(bundle.dataset, plan.train_fraction, plan.seeds.front());
    CEConfig ce = plan.ce;
    ce.seed = plan.seeds.front();
    return run_selector(selector, bundle.dataset, split, bundle.costs, bundle.loss, budget,
                        plan.classifier, ce, plan.brute_m_limit);
}

SweepRow result_to_row(const SelectionResult& result, const std::string& classifier_name,
                       std::size_t m, double lambda, std::uint64_t seed) {
    SweepRow row;
    row.selector = result.selector_name;
    row.classifier = classifier_name;
    row.m = m;
    row.lambda = lambda;
    row.seed = seed;
    row.risk = result.report.risk;
    row.utility = result.report.utility;
    row.total_cost = result.report.total_cost;
    row.macro_f1 = result.report.macro_f1;
    row.n_selected = result.selection.count();
    row.wall_time_ms = result.wall_time_ms;
    row.selected_mask = result.selection.to_bitstring();
    return row;
}

std::vector<SweepRow> run_sweep(const ExperimentPlan& plan, const DataBundle& bundle) {
    plan.validate(bundle.dataset.n_features());

    std::vector<std::size_t> prefixes = plan.prefix_lengths;
    if (prefixes.empty()) prefixes.push_back(bundle.dataset.n_features());
    std::sort(prefixes.begin(), prefixes.end());
    prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());

    const std::vector<std::size_t> ranking = plan_ranking(plan, bundle);

    // Restricted bundles are shared read-only across all cells of the same m.
    std::vector<DataBundle> restricted;
    restricted.reserve(prefixes.size());
    for (const std::size_t prefix : prefixes)
        restricted.push_back(restrict_to_prefix(bundle, ranking, prefix));

    struct Cell {
        std::size_t prefix_index;
        double lambda;
        std::string selector;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t pi = 0; pi < prefixes.size(); ++pi)
        for (const double lambda : plan.budgets)
            for (const auto& selector : plan.selectors)
                for (const std::uint64_t seed : plan.seeds)
                    cells.push_back({pi, lambda, selector, seed});

    const std::string classifier = classifier_name(plan.classifier.kind);
    std::vector<SweepRow> rows(cells.size());

    const auto run_cell = [&](std::size_t index) {
        const Cell& cell = cells[index];
        const DataBundle& data = restricted[cell.prefix_index];
        const std::size_t m = prefixes[cell.prefix_index];

        if (cell.selector == "brute" && m > plan.brute_m_limit) {
            SweepRow row;
            row.selector = cell.selector;
            row.classifier = classifier;
            row.m = m;
            row.lambda = cell.lambda;
            row.seed = cell.seed;
            row.status = "skipped";
            rows[index] = std::move(row);
            return;
        }

        const Split split = stratified_split(data.dataset, plan.train_fraction, cell.seed);
        CEConfig ce = plan.ce;
        ce.seed = cell.seed;
        const SelectionResult result =
            run_selector(cell.selector, data.dataset, split, data.costs, data.loss, cell.lambda,
                         plan.classifier, ce, plan.brute_m_limit);
        rows[index] = result_to_row(result, classifier, m, cell.lambda, cell.seed);
    };

    const std::size_t n_workers = std::min<std::size_t>(plan.workers, cells.size());
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.m, a.lambda, a.selector, a.seed) <
               std::tie(b.m, b.lambda, b.selector, b.seed);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].run_id = i;
    return rows;
}

std::vector<DiffRow> diff_ce_vga(std::span<const SweepRow> rows) {
    std::vector<DiffRow> diffs;
    for (const auto& ce_row : rows) {
        if (ce_row.selector != "ce" || ce_row.status != "ok") continue;
        for (const auto& vga_row : rows) {
            if (vga_row.selector != "vga" || vga_row.status != "ok") continue;
            if (vga_row.m != ce_row.m || vga_row.lambda != ce_row.lambda ||
                vga_row.seed != ce_row.seed)
                continue;
            DiffRow diff;
            diff.m = ce_row.m;
            diff.lambda = ce_row.lambda;
            diff.seed = ce_row.seed;
            diff.risk_ce = ce_row.risk;
            diff.risk_vga = vga_row.risk;
            diff.diff = ce_row.risk - vga_row.risk;
            diffs.push_back(diff);
        }
    }
    return diffs;
}

const char* const kResultsCsvHeader =
    "run_id,selector,classifier,m,lambda,seed,risk,utility,total_cost,macro_f1,n_selected,"
    "wall_time_ms,selected_mask,status";

void write_results_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kResultsCsvHeader << '\n';
    for (const auto& row : rows) {
        out << row.run_id << ',' << row.selector << ',' << row.classifier << ',' << row.m << ','
            << csv::format_double(row.lambda) << ',' << row.seed << ',';
        if (row.status == "ok") {
            out << csv::format_double(row.risk) << ',' << csv::format_double(row.utility) << ','
                << csv::format_double(row.total_cost) << ',' << csv::format_double(row.macro_f1)
                << ',' << row.n_selected << ',' << csv::format_double(row.wall_time_ms) << ','
                << row.selected_mask;
        } else {
            out << ",,,,,,";
        }
        out << ',' << row.status << '\n';
    }
}

void write_diff_csv(std::ostream& out, std::span<const DiffRow> rows) {
    out << "m,lambda,seed,risk_ce,risk_vga,diff\n";
    for (const auto& row : rows) {
        out << row.m << ',' << csv::format_double(row.lambda) << ',' << row.seed << ','
            << csv::format_double(row.risk_ce) << ',' << csv::format_double(row.risk_vga) << ','
            << csv::format_double(row.diff) << '\n';
    }
}

} // namespace riskfs
