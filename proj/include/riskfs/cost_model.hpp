#pragma once

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskfs/dataset.hpp"

namespace riskfs {

enum class CostLevel { low, medium, high };

CostLevel parse_cost_level(std::string_view word);

// Numeric values for the three categorical levels. Must be strictly
// increasing and positive; the default 1/2/3 keeps budgets on the small
// integer scale the experiments assume.
struct CostLevelMap {
    double low = 1.0;
    double medium = 2.0;
    double high = 3.0;

    double value(CostLevel level) const;
    void validate() const;
};

// Per-feature component costs; total is the median of the three.
struct FeatureCost {
    std::string feature_name;
    CostLevel memory = CostLevel::low;
    CostLevel compute = CostLevel::low;
    CostLevel privacy = CostLevel::low;
    double total = 0.0;
};

FeatureCost make_feature_cost(std::string feature_name, CostLevel memory, CostLevel compute,
                              CostLevel privacy, const CostLevelMap& levels = {});

// Middle order statistic of three values.
double median_of_three(double a, double b, double c);

// Per-feature extraction cost, aligned to dataset feature order. All > 0.
struct CostVector {
    std::vector<double> costs;

    std::size_t size() const { return costs.size(); }
    double operator[](std::size_t i) const { return costs[i]; }
    double total() const;
};

// costs.csv: header "feature,memory,compute,privacy" (level words) or
// "feature,cost" (positive decimal). Every feature name must appear exactly
// once; output is reordered to match feature_names.
CostVector load_costs(std::istream& costs_source, std::span<const std::string> feature_names,
                      const CostLevelMap& levels = {});

// Dot product of costs with the 0/1 mask.
double selection_cost(const CostVector& costs, const SelectionVector& selection);

// Inclusive comparison: a selection exactly on the budget is feasible.
bool is_feasible(const CostVector& costs, const SelectionVector& selection, double budget);

} // namespace riskfs
