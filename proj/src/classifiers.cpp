#include "riskfs/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace riskfs {

ClassifierKind parse_classifier_kind(std::string_view name) {
    if (name == "tree") return ClassifierKind::decision_tree;
    if (name == "gnb") return ClassifierKind::gaussian_nb;
    throw std::invalid_argument("unknown classifier \"" + std::string(name) +
                                "\" (expected \"tree\" or \"gnb\")");
}

std::string classifier_name(ClassifierKind kind) {
    return kind == ClassifierKind::decision_tree ? "tree" : "gnb";
}

namespace {

int majority_class(std::span<const std::int64_t> counts) {
    int best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

struct SplitChoice {
    double weighted_impurity = std::numeric_limits<double>::infinity();
    int feature = -1;
    double threshold = 0.0;
};

// Best Gini split over the node's rows, scanning features in index order and
// thresholds in ascending order so the first strict improvement wins ties.
SplitChoice best_split(const Matrix& X, std::span<const int> y,
                       std::span<const std::uint32_t> node_rows, std::size_t n_classes,
                       std::vector<std::uint32_t>& order_buf,
                       std::vector<std::int64_t>& left_counts,
                       std::vector<std::int64_t>& right_counts,
                       std::span<const std::int64_t> node_counts) {
    const std::size_t n = node_rows.size();
    SplitChoice best;
    for (std::size_t f = 0; f < X.cols(); ++f) {
        order_buf.assign(node_rows.begin(), node_rows.end());
        std::sort(order_buf.begin(), order_buf.end(), [&](std::uint32_t a, std::uint32_t b) {
            return X(a, f) < X(b, f);
        });

        std::fill(left_counts.begin(), left_counts.end(), 0);
        std::copy(node_counts.begin(), node_counts.end(), right_counts.begin());
        double left_sq = 0.0;  // sum of squared class counts on the left
        double right_sq = 0.0;
        for (std::size_t c = 0; c < n_classes; ++c)
            right_sq += static_cast<double>(node_counts[c]) * static_cast<double>(node_counts[c]);

        for (std::size_t k = 0; k + 1 < n; ++k) {
            const std::uint32_t row = order_buf[k];
            const auto c = static_cast<std::size_t>(y[row]);
            left_sq += 2.0 * static_cast<double>(left_counts[c]) + 1.0;
            right_sq -= 2.0 * static_cast<double>(right_counts[c]) - 1.0;
            ++left_counts[c];
            --right_counts[c];

            const double v = X(row, f);
            const double v_next = X(order_buf[k + 1], f);
            if (v == v_next) continue; // only boundaries between distinct values

            const auto nl = static_cast<double>(k + 1);
            const auto nr = static_cast<double>(n - k - 1);
            // n * weighted Gini of the two children
            const double weighted = (nl - left_sq / nl) + (nr - right_sq / nr);
            if (weighted < best.weighted_impurity) {
                best.weighted_impurity = weighted;
                best.feature = static_cast<int>(f);
                best.threshold = std::midpoint(v, v_next);
            }
        }
    }
    return best;
}

} // namespace

TrainedModel fit_decision_tree(const Matrix& train, std::span<const int> labels,
                               std::size_t n_classes, const ClassifierConfig& config) {
    if (train.rows() == 0) throw std::invalid_argument("decision tree: empty training set");
    if (labels.size() != train.rows())
        throw std::invalid_argument("decision tree: label count does not match rows");
    if (n_classes == 0) throw std::invalid_argument("decision tree: no classes");

    TrainedModel model;
    model.kind = ClassifierKind::decision_tree;
    model.n_classes = n_classes;
    model.n_features = train.cols();

    struct Task {
        std::vector<std::uint32_t> rows;
        int depth;
        int node_index;
    };

    auto& nodes = model.tree.nodes;
    nodes.emplace_back();
    std::vector<std::uint32_t> all_rows(train.rows());
    std::iota(all_rows.begin(), all_rows.end(), 0u);

    std::vector<Task> stack;
    stack.push_back({std::move(all_rows), 0, 0});

    std::vector<std::int64_t> node_counts(n_classes);
    std::vector<std::int64_t> left_counts(n_classes);
    std::vector<std::int64_t> right_counts(n_classes);
    std::vector<std::uint32_t> order_buf;

    while (!stack.empty()) {
        Task task = std::move(stack.back());
        stack.pop_back();

        std::fill(node_counts.begin(), node_counts.end(), 0);
        for (const std::uint32_t row : task.rows)
            ++node_counts[static_cast<std::size_t>(labels[row])];
        const int majority = majority_class(node_counts);
        const bool pure =
            node_counts[static_cast<std::size_t>(majority)] ==
            static_cast<std::int64_t>(task.rows.size());

        const bool stop = pure || task.depth >= config.max_depth ||
                          task.rows.size() < static_cast<std::size_t>(config.min_split) ||
                          train.cols() == 0;
        SplitChoice split;
        if (!stop)
            split = best_split(train, labels, task.rows, n_classes, order_buf, left_counts,
                               right_counts, node_counts);
        if (stop || split.feature < 0) {
            nodes[static_cast<std::size_t>(task.node_index)].leaf_class = majority;
            continue;
        }

        std::vector<std::uint32_t> left_rows;
        std::vector<std::uint32_t> right_rows;
        for (const std::uint32_t row : task.rows) {
            if (train(row, static_cast<std::size_t>(split.feature)) <= split.threshold)
                left_rows.push_back(row);
            else
                right_rows.push_back(row);
        }

        // index before growing: emplace_back may reallocate the node array
        const int left_index = static_cast<int>(nodes.size());
        const int right_index = left_index + 1;
        nodes.emplace_back();
        nodes.emplace_back();
        auto& node = nodes[static_cast<std::size_t>(task.node_index)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_index;
        node.right = right_index;
        stack.push_back({std::move(right_rows), task.depth + 1, right_index});
        stack.push_back({std::move(left_rows), task.depth + 1, left_index});
    }
    return model;
}

TrainedModel fit_gaussian_nb(const Matrix& train, std::span<const int> labels,
                             std::size_t n_classes, const ClassifierConfig&) {
    if (train.rows() == 0) throw std::invalid_argument("gaussian nb: empty training set");
    if (labels.size() != train.rows())
        throw std::invalid_argument("gaussian nb: label count does not match rows");
    if (n_classes == 0) throw std::invalid_argument("gaussian nb: no classes");

    const std::size_t n = train.rows();
    const std::size_t m = train.cols();

    TrainedModel model;
    model.kind = ClassifierKind::gaussian_nb;
    model.n_classes = n_classes;
    model.n_features = m;

    auto& nb = model.nb;
    nb.mean = Matrix(n_classes, m, 0.0);
    nb.variance = Matrix(n_classes, m, 0.0);
    nb.present.assign(n_classes, 0);
    nb.log_prior.assign(n_classes, -std::numeric_limits<double>::infinity());

    std::vector<std::int64_t> counts(n_classes, 0);
    for (const int label : labels) ++counts[static_cast<std::size_t>(label)];

    for (std::size_t r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(labels[r]);
        for (std::size_t f = 0; f < m; ++f) nb.mean(c, f) += train(r, f);
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (counts[c] == 0) continue;
        nb.present[c] = 1;
        nb.log_prior[c] =
            std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
        for (std::size_t f = 0; f < m; ++f) nb.mean(c, f) /= static_cast<double>(counts[c]);
    }
    for (std::size_t r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(labels[r]);
        for (std::size_t f = 0; f < m; ++f) {
            const double d = train(r, f) - nb.mean(c, f);
            nb.variance(c, f) += d * d;
        }
    }

    // Floor at 1e-9 of the largest whole-matrix per-feature variance.
    double max_column_variance = 0.0;
    for (std::size_t f = 0; f < m; ++f) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) sum += train(r, f);
        const double mean = sum / static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = train(r, f) - mean;
            var += d * d;
        }
        max_column_variance = std::max(max_column_variance, var / static_cast<double>(n));
    }
    const double floor = max_column_variance > 0.0 ? 1e-9 * max_column_variance : 1e-9;

    for (std::size_t c = 0; c < n_classes; ++c) {
        if (!nb.present[c]) continue;
        for (std::size_t f = 0; f < m; ++f) {
            const double var = nb.variance(c, f) / static_cast<double>(counts[c]);
            nb.variance(c, f) = std::max(var, floor);
        }
    }

    nb.prior_argmax = majority_class(counts);
    return model;
}

TrainedModel fit_classifier(const ClassifierConfig& config, const Matrix& train,
                            std::span<const int> labels, std::size_t n_classes) {
    return config.kind == ClassifierKind::decision_tree
               ? fit_decision_tree(train, labels, n_classes, config)
               : fit_gaussian_nb(train, labels, n_classes, config);
}

namespace {

int predict_tree(const DecisionTreeModel& tree, std::span<const double> row) {
    const TreeNode* node = &tree.nodes[0];
    while (!node->is_leaf()) {
        const double v = row[static_cast<std::size_t>(node->feature)];
        node = &tree.nodes[static_cast<std::size_t>(v <= node->threshold ? node->left
                                                                         : node->right)];
    }
    return node->leaf_class;
}

int predict_nb(const GaussianNbModel& nb, std::span<const double> row, std::size_t n_classes) {
    constexpr double log_two_pi = 1.8378770664093454835606594728112;
    int best = nb.prior_argmax;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (!nb.present[c]) continue;
        double score = nb.log_prior[c];
        for (std::size_t f = 0; f < row.size(); ++f) {
            const double var = nb.variance(c, f);
            const double d = row[f] - nb.mean(c, f);
            score -= 0.5 * (log_two_pi + std::log(var) + d * d / var);
        }
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(c);
        }
    }
    return best;
}

} // namespace

std::vector<int> predict(const TrainedModel& model, const Matrix& rows) {
    if (rows.cols() != model.n_features)
        throw std::invalid_argument("predict: feature count mismatch (model has " +
                                    std::to_string(model.n_features) + ", input has " +
                                    std::to_string(rows.cols()) + ")");
    std::vector<int> out(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        out[r] = model.kind == ClassifierKind::decision_tree
                     ? predict_tree(model.tree, rows.row(r))
                     : predict_nb(model.nb, rows.row(r), model.n_classes);
    }
    return out;
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (const std::int64_t v : counts) sum += v;
    return sum;
}

std::int64_t ConfusionMatrix::column_sum(std::size_t truth) const {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n_classes; ++i) sum += at(i, truth);
    return sum;
}

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels,
                          std::size_t n_classes) {
    if (true_labels.size() != predicted_labels.size())
        throw std::invalid_argument("confusion: label list length mismatch");
    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(n_classes * n_classes, 0);
    for (std::size_t k = 0; k < true_labels.size(); ++k) {
        const int truth = true_labels[k];
        const int predicted = predicted_labels[k];
        if (truth < 0 || static_cast<std::size_t>(truth) >= n_classes || predicted < 0 ||
            static_cast<std::size_t>(predicted) >= n_classes)
            throw std::invalid_argument("confusion: label out of range at position " +
                                        std::to_string(k));
        ++cm.at(static_cast<std::size_t>(predicted), static_cast<std::size_t>(truth));
    }
    return cm;
}

double macro_f1(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) throw std::invalid_argument("macro_f1: empty confusion matrix");
    double sum = 0.0;
    for (std::size_t c = 0; c < cm.n_classes; ++c) {
        const auto tp = static_cast<double>(cm.at(c, c));
        double predicted = 0.0;
        double actual = 0.0;
        for (std::size_t k = 0; k < cm.n_classes; ++k) {
            predicted += static_cast<double>(cm.at(c, k));
            actual += static_cast<double>(cm.at(k, c));
        }
        const double precision = predicted > 0.0 ? tp / predicted : 0.0;
        const double recall = actual > 0.0 ? tp / actual : 0.0;
        const double f1 =
            precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        sum += f1;
    }
    return sum / static_cast<double>(cm.n_classes);
}

} // namespace riskfs
