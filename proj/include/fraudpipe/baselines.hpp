#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fraudpipe/dataio.hpp"

namespace fraudpipe {

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
};

enum class SplitCriterion { gini, entropy };

struct TreeNode {
    // Split node when left and right are set; leaf otherwise.
    int feature = -1;
    double threshold = 0.0;
    double p_fraud = 0.0;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;

    bool is_leaf() const { return left == nullptr; }
};

struct BaselinePrediction {
    std::vector<double> scores;
    std::vector<int> predictions;  // scores > 0.5
};

double gini_impurity(double p_fraud);
double entropy_impurity(double p_fraud);  // in bits

/// Full-batch gradient descent on the log-loss, weights initialized to zero.
LogisticModel train_logistic(const Dataset& d, double learning_rate, int epochs,
                             std::uint64_t seed);

/// Greedy best-split CART. Threshold candidates are midpoints between
/// consecutive distinct sorted feature values; ties go to the lowest feature
/// index, then the lowest threshold. Stops at max_depth, min_leaf or zero
/// impurity.
std::unique_ptr<TreeNode> train_tree(const Dataset& d, SplitCriterion criterion, int max_depth,
                                     int min_leaf);

BaselinePrediction predict_baseline(const LogisticModel& m, const Matrix& rows);
BaselinePrediction predict_baseline(const TreeNode& tree, const Matrix& rows);

}  // namespace fraudpipe
