#include "riskfs/risk.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "riskfs/csv.hpp"

namespace riskfs {

MisclassMatrix misclass_probs(const ConfusionMatrix& cm) {
    const std::size_t n = cm.n_classes;
    MisclassMatrix probs;
    probs.probs = Matrix(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t column_total = cm.column_sum(j);
        if (column_total == 0) {
            probs.probs(j, j) = 1.0; // class absent from the test rows
            continue;
        }
        for (std::size_t i = 0; i < n; ++i)
            probs.probs(i, j) =
                static_cast<double>(cm.at(i, j)) / static_cast<double>(column_total);
    }
    return probs;
}

double risk_score(const MisclassMatrix& probs, const LossMatrix& loss) {
    if (probs.size() != loss.size())
        throw std::invalid_argument("risk_score: dimension mismatch");
    const auto& p = probs.probs.cells();
    const auto& l = loss.values.cells();
    double risk = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) risk += p[k] * l[k];
    return risk;
}

RiskReport evaluate_selection(const Dataset& dataset, const Split& split,
                              const SelectionVector& selection, const CostVector& costs,
                              const LossMatrix& loss, const ClassifierConfig& classifier_config) {
    const auto start = std::chrono::steady_clock::now();

    auto [train, train_labels] = project(dataset, split.train_rows, selection);
    auto [test, test_labels] = project(dataset, split.test_rows, selection);

    const TrainedModel model =
        fit_classifier(classifier_config, train, train_labels, dataset.n_classes());
    const std::vector<int> predicted = predict(model, test);

    RiskReport report;
    report.selection = selection;
    report.confusion = confusion(test_labels, predicted, dataset.n_classes());
    report.macro_f1 = macro_f1(report.confusion);
    report.risk = risk_score(misclass_probs(report.confusion), loss);
    report.utility = report.risk > 0.0 ? 1.0 / report.risk : 1.0 / kZeroRiskEpsilon;
    report.total_cost = selection_cost(costs, selection);

    const auto end = std::chrono::steady_clock::now();
    report.wall_time_ms = std::chrono::duration<double, std::milli>(end - start).count();
    return report;
}

std::string report_to_json(const RiskReport& report) {
    std::ostringstream out;
    out << "{\"selection\":\"" << report.selection.to_bitstring() << "\""
        << ",\"n_selected\":" << report.selection.count()
        << ",\"risk\":" << csv::format_double(report.risk)
        << ",\"utility\":" << csv::format_double(report.utility)
        << ",\"total_cost\":" << csv::format_double(report.total_cost)
        << ",\"macro_f1\":" << csv::format_double(report.macro_f1)
        << ",\"wall_time_ms\":" << csv::format_double(report.wall_time_ms) << ",\"confusion\":[";
    const std::size_t n = report.confusion.n_classes;
    for (std::size_t i = 0; i < n; ++i) {
        out << (i ? ",[" : "[");
        for (std::size_t j = 0; j < n; ++j) out << (j ? "," : "") << report.confusion.at(i, j);
        out << "]";
    }
    out << "]}";
    return out.str();
}

} // namespace riskfs
