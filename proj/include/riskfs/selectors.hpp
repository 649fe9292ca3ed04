#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskfs/risk.hpp"

namespace riskfs {

// Parameters of the cross-entropy search. rho is the quantile parameter: the
// elite set is the top (1 - rho) fraction of feasible samples by utility.
struct CEConfig {
    std::size_t eta = 1000;         // samples per iteration
    std::size_t t_max = 500;        // iteration cap
    double rho = 0.9;               // elite-quantile parameter
    double alpha = 0.7;             // smoothing / learning rate in [0, 1]
    double beta = 0.5;              // final decision threshold in (0, 1)
    std::uint64_t seed = 0;
    double epsilon_converge = 1e-3; // stop when all p_k are this close to 0/1

    void validate() const; // throws std::invalid_argument
};

struct CEIterationRecord {
    std::size_t iteration = 0;    // 1-based
    double gamma = 0.0;           // elite utility threshold (0 when eta_prime == 0)
    double mean_utility = 0.0;    // mean over feasible samples
    std::vector<double> p;        // Bernoulli parameters after the update
    std::size_t eta_prime = 0;    // feasible sample count
    SelectionVector incumbent;    // best feasible mask seen so far
    double incumbent_risk = 0.0;
};

struct CETrace {
    std::vector<CEIterationRecord> iterations;
    SelectionVector thresholded;     // mask produced by the beta cutoff
    bool thresholded_feasible = false;
    bool returned_incumbent = false; // fallback engaged at finalization
    std::size_t distinct_evaluations = 0;
};

struct SelectionResult {
    SelectionVector selection;
    RiskReport report;
    std::string selector_name;
    double wall_time_ms = 0.0;
    std::optional<CETrace> trace;
};

// Exhaustive enumeration of all 2^m masks, keeping the best feasible one.
// Ties break by lower total cost, then lexicographically smaller mask. The
// all-zero mask is always feasible, so a result always exists.
SelectionResult select_brute_force(const Dataset& dataset, const Split& split,
                                   const CostVector& costs, const LossMatrix& loss, double budget,
                                   const ClassifierConfig& classifier_config,
                                   std::size_t m_limit = 25);

enum class GreedyKey {
    cost,  // CGA: ascending feature cost
    risk,  // RGA: ascending single-feature risk
    value, // VGA: descending single-feature F1 / cost
};

GreedyKey parse_greedy_key(std::string_view selector_name); // "cga" | "rga" | "vga"

// Single pass over the key-sorted features, adding each one and reverting
// the add when it overshoots the budget; the scan continues past rejected
// features. The final mask is evaluated once.
SelectionResult select_greedy(const Dataset& dataset, const Split& split, const CostVector& costs,
                              const LossMatrix& loss, double budget,
                              const ClassifierConfig& classifier_config, GreedyKey key);

// Cross-entropy stochastic search: Bernoulli-sampled masks, budget filter,
// elite-quantile threshold, smoothed MLE update. Returns the beta-thresholded
// mask unless it is infeasible or worse than the best feasible sample seen,
// in which case the incumbent is returned.
SelectionResult select_cross_entropy(const Dataset& dataset, const Split& split,
                                     const CostVector& costs, const LossMatrix& loss, double budget,
                                     const ClassifierConfig& classifier_config,
                                     const CEConfig& ce_config);

enum class RankScheme { single_risk, file };

RankScheme parse_rank_scheme(std::string_view name);

// Feature ordering for prefix sweeps. single_risk orders by ascending
// single-feature risk (ties by index); file reads one feature name per line
// and must be a permutation of the dataset's names.
std::vector<std::size_t> rank_features(const Dataset& dataset, const Split& split,
                                       const CostVector& costs, const LossMatrix& loss,
                                       const ClassifierConfig& classifier_config,
                                       RankScheme scheme, std::istream* ordering_source = nullptr);

// Dispatch by CLI selector name: "ce", "brute", "cga", "rga", "vga".
SelectionResult run_selector(std::string_view selector_name, const Dataset& dataset,
                             const Split& split, const CostVector& costs, const LossMatrix& loss,
                             double budget, const ClassifierConfig& classifier_config,
                             const CEConfig& ce_config, std::size_t brute_m_limit = 25);

std::string trace_to_jsonl(const CETrace& trace);

} // namespace riskfs
