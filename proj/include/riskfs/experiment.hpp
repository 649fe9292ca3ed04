#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "riskfs/selectors.hpp"
#include "riskfs/synth.hpp"

namespace riskfs {

// Loaded inputs for one experiment: data, aligned costs, loss matrix.
struct DataBundle {
    Dataset dataset;
    CostVector costs;
    LossMatrix loss;
};

// Grid description for a sweep: Cartesian product of feature-prefix lengths,
// budgets, selectors, and seeds. Prefixes index into a feature ranking.
struct ExperimentPlan {
    std::vector<std::string> selectors;
    std::vector<double> budgets;
    std::vector<std::size_t> prefix_lengths; // empty -> full feature set only
    std::vector<std::uint64_t> seeds;        // drives split and CE sampling
    ClassifierConfig classifier;
    CEConfig ce;
    double train_fraction = 0.7;
    RankScheme rank_scheme = RankScheme::single_risk;
    std::string rank_file;    // used when rank_scheme == file
    std::size_t workers = 1;
    std::size_t brute_m_limit = 25;

    void validate(std::size_t m) const; // throws std::invalid_argument
};

// One long-format result row. Skipped cells (brute force beyond its feature
// limit) keep the schema with empty value fields and status "skipped".
struct SweepRow {
    std::size_t run_id = 0;
    std::string selector;
    std::string classifier;
    std::size_t m = 0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    double risk = 0.0;
    double utility = 0.0;
    double total_cost = 0.0;
    double macro_f1 = 0.0;
    std::size_t n_selected = 0;
    double wall_time_ms = 0.0;
    std::string selected_mask;
    std::string status = "ok";
};

// R_CE - R_VGA for one grid cell, the difference-surface quantity.
struct DiffRow {
    std::size_t m = 0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    double risk_ce = 0.0;
    double risk_vga = 0.0;
    double diff = 0.0;
};

// Runs one selector on the full bundle and returns its result.
SelectionResult run_single(const DataBundle& bundle, const std::string& selector,
                           double budget, const ExperimentPlan& plan);

// Runs the full grid. Cells execute independently (up to plan.workers
// threads); rows come back sorted by (m, lambda, selector, seed) with run_id
// assigned after the sort, so reruns reproduce every non-timing column.
std::vector<SweepRow> run_sweep(const ExperimentPlan& plan, const DataBundle& bundle);

// Pairs CE and VGA rows of the same (m, lambda, seed) cell.
std::vector<DiffRow> diff_ce_vga(std::span<const SweepRow> rows);

extern const char* const kResultsCsvHeader;

void write_results_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_diff_csv(std::ostream& out, std::span<const DiffRow> rows);
SweepRow result_to_row(const SelectionResult& result, const std::string& classifier_name,
                       std::size_t m, double lambda, std::uint64_t seed);

// Ranking used for prefix sweeps, computed once per plan with the first
// seed's split (or read from plan.rank_file).
std::vector<std::size_t> plan_ranking(const ExperimentPlan& plan, const DataBundle& bundle);

// Restriction of the bundle to the first `prefix` features of `ranking`.
DataBundle restrict_to_prefix(const DataBundle& bundle, std::span<const std::size_t> ranking,
                              std::size_t prefix);

} // namespace riskfs
