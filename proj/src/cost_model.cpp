#include "riskfs/cost_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "riskfs/csv.hpp"

namespace riskfs {

CostLevel parse_cost_level(std::string_view word) {
    const std::string key = csv::normalize(word);
    if (key == "low") return CostLevel::low;
    if (key == "medium") return CostLevel::medium;
    if (key == "high") return CostLevel::high;
    throw std::invalid_argument("unrecognized cost level \"" + std::string(word) + "\"");
}

double CostLevelMap::value(CostLevel level) const {
    switch (level) {
    case CostLevel::low: return low;
    case CostLevel::medium: return medium;
    case CostLevel::high: return high;
    }
    throw std::invalid_argument("bad cost level");
}

void CostLevelMap::validate() const {
    if (!(low > 0.0 && low < medium && medium < high))
        throw std::invalid_argument("cost level values must be positive and strictly increasing");
}

double median_of_three(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

FeatureCost make_feature_cost(std::string feature_name, CostLevel memory, CostLevel compute,
                              CostLevel privacy, const CostLevelMap& levels) {
    levels.validate();
    FeatureCost cost;
    cost.feature_name = std::move(feature_name);
    cost.memory = memory;
    cost.compute = compute;
    cost.privacy = privacy;
    cost.total = median_of_three(levels.value(memory), levels.value(compute),
                                 levels.value(privacy));
    return cost;
}

double CostVector::total() const {
    double sum = 0.0;
    for (double c : costs) sum += c;
    return sum;
}

CostVector load_costs(std::istream& costs_source, std::span<const std::string> feature_names,
                      const CostLevelMap& levels) {
    levels.validate();
    const auto rows = csv::read_rows(costs_source);
    if (rows.empty()) throw std::runtime_error("costs: empty input");

    const auto& header = rows.front().cells;
    bool component_form = false;
    if (header.size() == 4 && csv::normalize(header[0]) == "feature" &&
        csv::normalize(header[1]) == "memory" && csv::normalize(header[2]) == "compute" &&
        csv::normalize(header[3]) == "privacy") {
        component_form = true;
    } else if (header.size() == 2 && csv::normalize(header[0]) == "feature" &&
               csv::normalize(header[1]) == "cost") {
        component_form = false;
    } else {
        throw std::runtime_error(
            "costs: expected header \"feature,memory,compute,privacy\" or \"feature,cost\"");
    }

    std::unordered_map<std::string, std::size_t> feature_index;
    for (std::size_t c = 0; c < feature_names.size(); ++c)
        feature_index.emplace(csv::normalize(feature_names[c]), c);

    CostVector result;
    result.costs.assign(feature_names.size(), 0.0);
    std::vector<std::uint8_t> filled(feature_names.size(), 0);

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::size_t expected = component_form ? 4 : 2;
        if (row.cells.size() != expected)
            throw std::runtime_error("costs: row " + std::to_string(row.line_no) + ": expected " +
                                     std::to_string(expected) + " columns");
        const auto it = feature_index.find(csv::normalize(row.cells[0]));
        if (it == feature_index.end())
            throw std::runtime_error("costs: row " + std::to_string(row.line_no) +
                                     ": unknown feature \"" + row.cells[0] + "\"");
        if (filled[it->second])
            throw std::runtime_error("costs: row " + std::to_string(row.line_no) +
                                     ": duplicate feature \"" + row.cells[0] + "\"");
        double total = 0.0;
        if (component_form) {
            total = median_of_three(levels.value(parse_cost_level(row.cells[1])),
                                    levels.value(parse_cost_level(row.cells[2])),
                                    levels.value(parse_cost_level(row.cells[3])));
        } else {
            total = csv::parse_double(row.cells[1]);
            if (!(total > 0.0))
                throw std::runtime_error("costs: row " + std::to_string(row.line_no) +
                                         ": cost must be positive, got \"" + row.cells[1] + "\"");
        }
        result.costs[it->second] = total;
        filled[it->second] = 1;
    }

    for (std::size_t c = 0; c < feature_names.size(); ++c)
        if (!filled[c])
            throw std::runtime_error("costs: missing feature \"" + feature_names[c] + "\"");
    return result;
}

double selection_cost(const CostVector& costs, const SelectionVector& selection) {
    if (costs.size() != selection.size())
        throw std::invalid_argument("cost vector and selection length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i)
        if (selection[i]) sum += costs[i];
    return sum;
}

bool is_feasible(const CostVector& costs, const SelectionVector& selection, double budget) {
    return selection_cost(costs, selection) <= budget;
}

} // namespace riskfs
