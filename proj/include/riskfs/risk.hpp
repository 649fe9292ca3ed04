#pragma once

#include <string>

#include "riskfs/classifiers.hpp"
#include "riskfs/cost_model.hpp"
#include "riskfs/dataset.hpp"
#include "riskfs/loss_model.hpp"

namespace riskfs {

// Column-stochastic estimate of Pr(predicted = i | true = j).
struct MisclassMatrix {
    Matrix probs;

    std::size_t size() const { return probs.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return probs(i, j); }
};

// Columns are normalized by their test counts; a class absent from the test
// rows gets the identity column.
MisclassMatrix misclass_probs(const ConfusionMatrix& confusion);

// Expected misclassification loss: sum over (i, j) of probs(i,j) * loss(i,j).
double risk_score(const MisclassMatrix& probs, const LossMatrix& loss);

// Utility for a zero-risk selection: 1 / kZeroRiskEpsilon. Kept finite so the
// optimizer's quantile and update arithmetic never sees infinities.
inline constexpr double kZeroRiskEpsilon = 1e-12;

// Everything measured for one (selection, classifier, split) evaluation.
struct RiskReport {
    SelectionVector selection;
    double risk = 0.0;
    double utility = 0.0;
    double total_cost = 0.0;
    ConfusionMatrix confusion;
    double macro_f1 = 0.0;
    double wall_time_ms = 0.0;
};

// Projects train/test rows by the selection, fits the configured classifier,
// and scores the test predictions.
RiskReport evaluate_selection(const Dataset& dataset, const Split& split,
                              const SelectionVector& selection, const CostVector& costs,
                              const LossMatrix& loss, const ClassifierConfig& classifier_config);

// JSON object with the report's scalar fields, mask bitstring, and confusion
// counts.
std::string report_to_json(const RiskReport& report);

} // namespace riskfs
