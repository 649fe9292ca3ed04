#include "riskfs/selectors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "riskfs/csv.hpp"
#include "riskfs/rng.hpp"

namespace riskfs {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// (risk, cost, mask) ordering used everywhere a best selection is kept:
// lower risk first, then lower cost, then lexicographically smaller mask.
bool better_than(const RiskReport& a, const RiskReport& b) {
    if (a.risk != b.risk) return a.risk < b.risk;
    if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
    return std::lexicographical_compare(a.selection.mask.begin(), a.selection.mask.end(),
                                        b.selection.mask.begin(), b.selection.mask.end());
}

// Single-feature reports for the RGA/VGA keys and the risk ranking.
std::vector<RiskReport> single_feature_reports(const Dataset& dataset, const Split& split,
                                               const CostVector& costs, const LossMatrix& loss,
                                               const ClassifierConfig& classifier_config) {
    const std::size_t m = dataset.n_features();
    std::vector<RiskReport> reports;
    reports.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        SelectionVector single = SelectionVector::zeros(m);
        single.mask[k] = 1;
        reports.push_back(
            evaluate_selection(dataset, split, single, costs, loss, classifier_config));
    }
    return reports;
}

} // namespace

SelectionResult select_brute_force(const Dataset& dataset, const Split& split,
                                   const CostVector& costs, const LossMatrix& loss, double budget,
                                   const ClassifierConfig& classifier_config,
                                   std::size_t m_limit) {
    const std::size_t m = dataset.n_features();
    if (m > m_limit)
        throw std::invalid_argument("brute force: " + std::to_string(m) +
                                    " features exceed the limit of " + std::to_string(m_limit));

    const auto start = Clock::now();
    SelectionResult result;
    result.selector_name = "brute";

    bool have_best = false;
    RiskReport best;
    const std::uint64_t n_masks = std::uint64_t{1} << m;
    for (std::uint64_t bits = 0; bits < n_masks; ++bits) {
        SelectionVector candidate = SelectionVector::zeros(m);
        for (std::size_t k = 0; k < m; ++k)
            if (bits & (std::uint64_t{1} << k)) candidate.mask[k] = 1;
        if (!is_feasible(costs, candidate, budget)) continue;
        RiskReport report =
            evaluate_selection(dataset, split, candidate, costs, loss, classifier_config);
        if (!have_best || better_than(report, best)) {
            best = std::move(report);
            have_best = true;
        }
    }
    // The all-zero mask has cost 0, so at least it was feasible.
    result.selection = best.selection;
    result.report = std::move(best);
    result.wall_time_ms = elapsed_ms(start);
    return result;
}

GreedyKey parse_greedy_key(std::string_view selector_name) {
    if (selector_name == "cga") return GreedyKey::cost;
    if (selector_name == "rga") return GreedyKey::risk;
    if (selector_name == "vga") return GreedyKey::value;
    throw std::invalid_argument("unknown greedy selector \"" + std::string(selector_name) + "\"");
}

SelectionResult select_greedy(const Dataset& dataset, const Split& split, const CostVector& costs,
                              const LossMatrix& loss, double budget,
                              const ClassifierConfig& classifier_config, GreedyKey key) {
    if (budget < 0.0) throw std::invalid_argument("greedy: budget must be nonnegative");
    const auto start = Clock::now();
    const std::size_t m = dataset.n_features();

    std::vector<double> keys(m, 0.0);
    bool descending = false;
    switch (key) {
    case GreedyKey::cost:
        for (std::size_t k = 0; k < m; ++k) keys[k] = costs[k];
        break;
    case GreedyKey::risk: {
        const auto singles = single_feature_reports(dataset, split, costs, loss, classifier_config);
        for (std::size_t k = 0; k < m; ++k) keys[k] = singles[k].risk;
        break;
    }
    case GreedyKey::value: {
        const auto singles = single_feature_reports(dataset, split, costs, loss, classifier_config);
        for (std::size_t k = 0; k < m; ++k) keys[k] = singles[k].macro_f1 / costs[k];
        descending = true;
        break;
    }
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? keys[a] > keys[b] : keys[a] < keys[b];
    });

    // Tentatively add each feature in key order; revert when the running cost
    // overshoots the budget and keep scanning.
    SelectionVector selection = SelectionVector::zeros(m);
    double running_cost = 0.0;
    for (const std::size_t k : order) {
        if (running_cost + costs[k] <= budget) {
            selection.mask[k] = 1;
            running_cost += costs[k];
        }
    }

    SelectionResult result;
    result.selector_name = key == GreedyKey::cost   ? "cga"
                           : key == GreedyKey::risk ? "rga"
                                                    : "vga";
    result.report = evaluate_selection(dataset, split, selection, costs, loss, classifier_config);
    result.selection = std::move(selection);
    result.wall_time_ms = elapsed_ms(start);
    return result;
}

void CEConfig::validate() const {
    if (eta < 10) throw std::invalid_argument("ce: eta must be at least 10");
    if (t_max == 0) throw std::invalid_argument("ce: t_max must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("ce: rho must be in (0, 1)");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("ce: alpha must be in [0, 1]");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("ce: beta must be in (0, 1)");
    if (epsilon_converge < 0.0)
        throw std::invalid_argument("ce: epsilon_converge must be nonnegative");
}

SelectionResult select_cross_entropy(const Dataset& dataset, const Split& split,
                                     const CostVector& costs, const LossMatrix& loss, double budget,
                                     const ClassifierConfig& classifier_config,
                                     const CEConfig& ce_config) {
    ce_config.validate();
    if (budget < 0.0) throw std::invalid_argument("ce: budget must be nonnegative");

    const auto start = Clock::now();
    const std::size_t m = dataset.n_features();
    Rng rng(ce_config.seed);

    // Mask evaluations are memoized per run: once the Bernoulli parameters
    // concentrate, most samples repeat and the classifier fit dominates cost.
    std::unordered_map<std::string, RiskReport> cache;
    const auto evaluate_cached = [&](const SelectionVector& mask) -> const RiskReport& {
        const std::string key = mask.to_bitstring();
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        return cache
            .emplace(key, evaluate_selection(dataset, split, mask, costs, loss, classifier_config))
            .first->second;
    };

    CETrace trace;
    std::vector<double> p(m, 0.5);
    bool have_incumbent = false;
    RiskReport incumbent;
    int consecutive_empty = 0;
    bool give_up = false;

    std::vector<SelectionVector> feasible;
    std::vector<double> utilities;
    std::vector<double> sorted_utilities;
    feasible.reserve(ce_config.eta);

    for (std::size_t t = 1; t <= ce_config.t_max; ++t) {
        // S1: Bernoulli samples, one bit stream per sample in index order.
        feasible.clear();
        utilities.clear();
        for (std::size_t i = 0; i < ce_config.eta; ++i) {
            SelectionVector sample = SelectionVector::zeros(m);
            for (std::size_t k = 0; k < m; ++k)
                if (rng.bernoulli(p[k])) sample.mask[k] = 1;
            if (is_feasible(costs, sample, budget)) feasible.push_back(std::move(sample));
        }

        CEIterationRecord record;
        record.iteration = t;
        record.eta_prime = feasible.size();

        if (feasible.empty()) {
            // Degenerate iteration: shrink every parameter toward zero so the
            // next batch is cheaper, and bail out after ten in a row.
            for (double& pk : p) pk *= 0.5;
            if (++consecutive_empty >= 10) {
                give_up = true;
                record.p = p;
                if (have_incumbent) {
                    record.incumbent = incumbent.selection;
                    record.incumbent_risk = incumbent.risk;
                }
                trace.iterations.push_back(std::move(record));
                break;
            }
            record.p = p;
            if (have_incumbent) {
                record.incumbent = incumbent.selection;
                record.incumbent_risk = incumbent.risk;
            }
            trace.iterations.push_back(std::move(record));
            continue;
        }
        consecutive_empty = 0;

        // S2: evaluate feasible samples in sample order, then take gamma as
        // the smallest elite utility; the elite set is the top ceil((1-rho) *
        // eta') samples.
        double utility_sum = 0.0;
        for (const auto& sample : feasible) {
            const RiskReport& report = evaluate_cached(sample);
            utilities.push_back(report.utility);
            utility_sum += report.utility;
            if (!have_incumbent || better_than(report, incumbent)) {
                incumbent = report;
                have_incumbent = true;
            }
        }

        const std::size_t eta_prime = feasible.size();
        auto elite_count = static_cast<std::size_t>(
            std::ceil((1.0 - ce_config.rho) * static_cast<double>(eta_prime)));
        elite_count = std::clamp<std::size_t>(elite_count, 1, eta_prime);
        sorted_utilities = utilities;
        std::nth_element(sorted_utilities.begin(),
                         sorted_utilities.begin() + static_cast<std::ptrdiff_t>(elite_count - 1),
                         sorted_utilities.end(), std::greater<double>());
        const double gamma = sorted_utilities[elite_count - 1];

        // S3: smoothed MLE update from the elites (duplicates count per draw).
        std::vector<double> elite_frequency(m, 0.0);
        std::size_t n_elite = 0;
        for (std::size_t i = 0; i < eta_prime; ++i) {
            if (utilities[i] < gamma) continue;
            ++n_elite;
            for (std::size_t k = 0; k < m; ++k)
                if (feasible[i][k]) elite_frequency[k] += 1.0;
        }
        for (std::size_t k = 0; k < m; ++k) {
            const double mle = elite_frequency[k] / static_cast<double>(n_elite);
            p[k] = ce_config.alpha * mle + (1.0 - ce_config.alpha) * p[k];
        }

        record.gamma = gamma;
        record.mean_utility = utility_sum / static_cast<double>(eta_prime);
        record.p = p;
        record.incumbent = incumbent.selection;
        record.incumbent_risk = incumbent.risk;
        trace.iterations.push_back(std::move(record));

        double max_distance = 0.0;
        for (const double pk : p)
            max_distance = std::max(max_distance, std::abs(pk - std::round(pk)));
        if (max_distance < ce_config.epsilon_converge) break;
    }

    // Finalization: threshold at beta, falling back to the incumbent when the
    // thresholded mask is infeasible or strictly worse.
    SelectionVector thresholded = SelectionVector::zeros(m);
    for (std::size_t k = 0; k < m; ++k)
        if (p[k] >= ce_config.beta) thresholded.mask[k] = 1;
    trace.thresholded = thresholded;
    trace.thresholded_feasible = is_feasible(costs, thresholded, budget);

    SelectionResult result;
    result.selector_name = "ce";

    if (give_up && !have_incumbent) {
        result.selection = SelectionVector::zeros(m);
        result.report =
            evaluate_selection(dataset, split, result.selection, costs, loss, classifier_config);
        trace.returned_incumbent = true;
    } else {
        RiskReport chosen;
        if (trace.thresholded_feasible) {
            const RiskReport& thresholded_report = evaluate_cached(thresholded);
            if (have_incumbent && incumbent.risk < thresholded_report.risk) {
                chosen = incumbent;
                trace.returned_incumbent = true;
            } else {
                chosen = thresholded_report;
            }
        } else if (have_incumbent) {
            chosen = incumbent;
            trace.returned_incumbent = true;
        } else {
            chosen = evaluate_cached(SelectionVector::zeros(m));
            trace.returned_incumbent = true;
        }
        result.selection = chosen.selection;
        result.report = std::move(chosen);
    }

    trace.distinct_evaluations = cache.size();
    result.trace = std::move(trace);
    result.wall_time_ms = elapsed_ms(start);
    return result;
}

RankScheme parse_rank_scheme(std::string_view name) {
    if (name == "single_risk") return RankScheme::single_risk;
    if (name == "file") return RankScheme::file;
    throw std::invalid_argument("unknown rank scheme \"" + std::string(name) + "\"");
}

std::vector<std::size_t> rank_features(const Dataset& dataset, const Split& split,
                                       const CostVector& costs, const LossMatrix& loss,
                                       const ClassifierConfig& classifier_config,
                                       RankScheme scheme, std::istream* ordering_source) {
    const std::size_t m = dataset.n_features();
    if (scheme == RankScheme::single_risk) {
        const auto singles = single_feature_reports(dataset, split, costs, loss, classifier_config);
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return singles[a].risk < singles[b].risk;
        });
        return order;
    }

    if (ordering_source == nullptr)
        throw std::invalid_argument("rank_features: file scheme requires an ordering source");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < m; ++k)
        index.emplace(csv::normalize(dataset.feature_names[k]), k);

    std::vector<std::size_t> order;
    std::vector<std::uint8_t> seen(m, 0);
    std::string line;
    while (std::getline(*ordering_source, line)) {
        const std::string name = csv::trim(line);
        if (name.empty()) continue;
        const auto it = index.find(csv::normalize(name));
        if (it == index.end())
            throw std::runtime_error("rank_features: unknown feature \"" + name + "\"");
        if (seen[it->second])
            throw std::runtime_error("rank_features: duplicate feature \"" + name + "\"");
        seen[it->second] = 1;
        order.push_back(it->second);
    }
    if (order.size() != m)
        throw std::runtime_error("rank_features: ordering lists " + std::to_string(order.size()) +
                                 " of " + std::to_string(m) + " features");
    return order;
}

SelectionResult run_selector(std::string_view selector_name, const Dataset& dataset,
                             const Split& split, const CostVector& costs, const LossMatrix& loss,
                             double budget, const ClassifierConfig& classifier_config,
                             const CEConfig& ce_config, std::size_t brute_m_limit) {
    if (selector_name == "ce")
        return select_cross_entropy(dataset, split, costs, loss, budget, classifier_config,
                                    ce_config);
    if (selector_name == "brute")
        return select_brute_force(dataset, split, costs, loss, budget, classifier_config,
                                  brute_m_limit);
    return select_greedy(dataset, split, costs, loss, budget, classifier_config,
                         parse_greedy_key(selector_name));
}

std::string trace_to_jsonl(const CETrace& trace) {
    std::ostringstream out;
    for (const auto& record : trace.iterations) {
        out << "{\"iteration\":" << record.iteration
            << ",\"eta_prime\":" << record.eta_prime
            << ",\"gamma\":" << csv::format_double(record.gamma)
            << ",\"mean_utility\":" << csv::format_double(record.mean_utility) << ",\"p\":[";
        for (std::size_t k = 0; k < record.p.size(); ++k)
            out << (k ? "," : "") << csv::format_double(record.p[k]);
        out << "],\"incumbent\":\"" << record.incumbent.to_bitstring()
            << "\",\"incumbent_risk\":" << csv::format_double(record.incumbent_risk) << "}\n";
    }
    out << "{\"thresholded\":\"" << trace.thresholded.to_bitstring()
        << "\",\"thresholded_feasible\":" << (trace.thresholded_feasible ? "true" : "false")
        << ",\"returned_incumbent\":" << (trace.returned_incumbent ? "true" : "false")
        << ",\"distinct_evaluations\":" << trace.distinct_evaluations << "}\n";
    return out.str();
}

} // namespace riskfs
