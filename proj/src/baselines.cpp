#include "fraudpipe/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fraudpipe/neural.hpp"

namespace fraudpipe {

double gini_impurity(double p_fraud) {
    const double p0 = 1.0 - p_fraud;
    return 1.0 - p0 * p0 - p_fraud * p_fraud;
}

double entropy_impurity(double p_fraud) {
    double h = 0.0;
    for (const double p : {p_fraud, 1.0 - p_fraud}) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

LogisticModel train_logistic(const Dataset& d, double learning_rate, int epochs,
                             std::uint64_t seed) {
    (void)seed;  // zero initialization and full-batch descent need no randomness
    if (d.n_rows() == 0) {
        throw std::invalid_argument("train_logistic: empty data");
    }
    if (d.count_label(0) == 0 || d.count_label(1) == 0) {
        throw std::invalid_argument("train_logistic: both classes must be present");
    }

    const std::size_t n = d.n_rows();
    const std::size_t cols = d.n_cols();
    LogisticModel m;
    m.weights.assign(cols, 0.0);

    std::vector<double> grad(cols);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = d.features.row(r);
            double z = m.bias;
            for (std::size_t c = 0; c < cols; ++c) z += m.weights[c] * row[c];
            const double residual =
                apply_activation(Activation::sigmoid, z) - static_cast<double>(d.labels[r]);
            for (std::size_t c = 0; c < cols; ++c) grad[c] += residual * row[c];
            grad_bias += residual;
        }
        const double step = learning_rate / static_cast<double>(n);
        for (std::size_t c = 0; c < cols; ++c) m.weights[c] -= step * grad[c];
        m.bias -= step * grad_bias;
    }
    return m;
}

namespace {

double impurity(SplitCriterion criterion, double p_fraud) {
    return criterion == SplitCriterion::gini ? gini_impurity(p_fraud)
                                             : entropy_impurity(p_fraud);
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double weighted_child_impurity = std::numeric_limits<double>::infinity();
};

std::unique_ptr<TreeNode> grow(const Dataset& d, const std::vector<std::size_t>& rows,
                               SplitCriterion criterion, int depth, int max_depth,
                               int min_leaf) {
    auto node = std::make_unique<TreeNode>();
    const auto n = static_cast<double>(rows.size());
    std::size_t n_fraud = 0;
    for (std::size_t r : rows) n_fraud += static_cast<std::size_t>(d.labels[r]);
    node->p_fraud = static_cast<double>(n_fraud) / n;

    const bool pure = n_fraud == 0 || n_fraud == rows.size();
    if (pure || depth >= max_depth || rows.size() < 2 * static_cast<std::size_t>(min_leaf)) {
        return node;
    }

    // Best split by weighted child impurity; ties resolved to the lowest
    // feature index, then the lowest threshold (scan order guarantees both).
    SplitChoice best;
    std::vector<std::pair<double, int>> values(rows.size());
    for (std::size_t f = 0; f < d.n_cols(); ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            values[i] = {d.features(rows[i], f), d.labels[rows[i]]};
        }
        std::sort(values.begin(), values.end());

        std::size_t left_n = 0;
        std::size_t left_fraud = 0;
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            ++left_n;
            left_fraud += static_cast<std::size_t>(values[i].second);
            if (values[i].first == values[i + 1].first) continue;  // not a boundary
            const std::size_t right_n = values.size() - left_n;
            if (left_n < static_cast<std::size_t>(min_leaf) ||
                right_n < static_cast<std::size_t>(min_leaf)) {
                continue;
            }
            const double threshold = values[i].first + (values[i + 1].first - values[i].first) / 2.0;
            const double p_left = static_cast<double>(left_fraud) / static_cast<double>(left_n);
            const double p_right = static_cast<double>(n_fraud - left_fraud) /
                                   static_cast<double>(right_n);
            const double weighted = (static_cast<double>(left_n) * impurity(criterion, p_left) +
                                     static_cast<double>(right_n) * impurity(criterion, p_right)) /
                                    n;
            if (weighted < best.weighted_child_impurity) {
                best.feature = static_cast<int>(f);
                best.threshold = threshold;
                best.weighted_child_impurity = weighted;
            }
        }
    }

    if (best.feature < 0) {
        return node;  // no admissible split
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
        if (d.features(r, static_cast<std::size_t>(best.feature)) <= best.threshold) {
            left_rows.push_back(r);
        } else {
            right_rows.push_back(r);
        }
    }

    node->feature = best.feature;
    node->threshold = best.threshold;
    node->left = grow(d, left_rows, criterion, depth + 1, max_depth, min_leaf);
    node->right = grow(d, right_rows, criterion, depth + 1, max_depth, min_leaf);
    return node;
}

}  // namespace

std::unique_ptr<TreeNode> train_tree(const Dataset& d, SplitCriterion criterion, int max_depth,
                                     int min_leaf) {
    if (d.n_rows() == 0) {
        throw std::invalid_argument("train_tree: empty data");
    }
    if (max_depth < 1) {
        throw std::invalid_argument("train_tree: max_depth must be >= 1");
    }
    if (min_leaf < 1) {
        throw std::invalid_argument("train_tree: min_leaf must be >= 1");
    }
    std::vector<std::size_t> rows(d.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    return grow(d, rows, criterion, 0, max_depth, min_leaf);
}

namespace {

BaselinePrediction from_scores(std::vector<double> scores) {
    BaselinePrediction p;
    p.predictions.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        p.predictions[i] = scores[i] > 0.5 ? 1 : 0;
    }
    p.scores = std::move(scores);
    return p;
}

}  // namespace

BaselinePrediction predict_baseline(const LogisticModel& m, const Matrix& rows) {
    if (rows.rows() > 0 && rows.cols() != m.weights.size()) {
        throw std::invalid_argument("predict_baseline: feature count mismatch");
    }
    std::vector<double> scores(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        double z = m.bias;
        const auto row = rows.row(r);
        for (std::size_t c = 0; c < m.weights.size(); ++c) z += m.weights[c] * row[c];
        scores[r] = apply_activation(Activation::sigmoid, z);
    }
    return from_scores(std::move(scores));
}

BaselinePrediction predict_baseline(const TreeNode& tree, const Matrix& rows) {
    std::vector<double> scores(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        const TreeNode* node = &tree;
        while (!node->is_leaf()) {
            if (rows(r, static_cast<std::size_t>(node->feature)) <= node->threshold) {
                node = node->left.get();
            } else {
                node = node->right.get();
            }
        }
        scores[r] = node->p_fraud;
    }
    return from_scores(std::move(scores));
}

}  // namespace fraudpipe
