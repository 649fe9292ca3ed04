#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskfs/matrix.hpp"

namespace riskfs {

enum class ClassifierKind { decision_tree, gaussian_nb };

ClassifierKind parse_classifier_kind(std::string_view name); // "tree" | "gnb"
std::string classifier_name(ClassifierKind kind);

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::decision_tree;
    int max_depth = 12; // decision tree only
    int min_split = 2;  // decision tree only
};

// CART node. Interior nodes route rows with value <= threshold to the left
// child; leaves carry the majority class of their training rows.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_class = -1;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTreeModel {
    std::vector<TreeNode> nodes; // nodes[0] is the root
};

struct GaussianNbModel {
    std::vector<double> log_prior;      // -inf for classes absent from training
    Matrix mean;                        // n_classes x n_features
    Matrix variance;                    // floored, same shape
    std::vector<std::uint8_t> present;  // class seen in training data
    int prior_argmax = 0;               // most frequent class, ties to lower id
};

// Fitted classifier state. Prediction is a pure function of this struct, and
// refitting on identical data reproduces identical predictions.
struct TrainedModel {
    ClassifierKind kind = ClassifierKind::decision_tree;
    std::size_t n_classes = 0;
    std::size_t n_features = 0;
    DecisionTreeModel tree;
    GaussianNbModel nb;
};

// Gini-impurity CART with midpoint thresholds. Tie-breaking is pinned:
// equal-impurity splits prefer the lower feature index then lower threshold,
// leaf majorities prefer the lower class id. With zero features the tree is
// a single leaf predicting the global majority class.
TrainedModel fit_decision_tree(const Matrix& train, std::span<const int> labels,
                               std::size_t n_classes, const ClassifierConfig& config = {});

// Per-class priors and per-class/per-feature Gaussians. Variances are floored
// at 1e-9 times the largest whole-matrix per-feature variance (1e-9 absolute
// when that is zero). Argmax ties go to the lower class id.
TrainedModel fit_gaussian_nb(const Matrix& train, std::span<const int> labels,
                             std::size_t n_classes, const ClassifierConfig& config = {});

TrainedModel fit_classifier(const ClassifierConfig& config, const Matrix& train,
                            std::span<const int> labels, std::size_t n_classes);

std::vector<int> predict(const TrainedModel& model, const Matrix& rows);

// counts(i, j) = number of true-class-j rows predicted as class i, so column
// sums equal the per-class test counts.
struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::int64_t> counts; // row-major, predicted x true

    std::int64_t at(std::size_t predicted, std::size_t truth) const {
        return counts[predicted * n_classes + truth];
    }
    std::int64_t& at(std::size_t predicted, std::size_t truth) {
        return counts[predicted * n_classes + truth];
    }
    std::int64_t total() const;
    std::int64_t column_sum(std::size_t truth) const;
};

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels,
                          std::size_t n_classes);

// Unweighted mean over classes of the per-class F1, with 0/0 -> 0.
double macro_f1(const ConfusionMatrix& confusion);

} // namespace riskfs
