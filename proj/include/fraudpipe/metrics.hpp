#pragma once

#include <cstddef>
#include <vector>

namespace fraudpipe {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

struct SummaryMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// ROC curve as aligned point lists. Points run from (0,0) to (1,1) and
/// there is one point per distinct score plus the (0,0) anchor, whose
/// threshold is max(score) + 1 (no sample is predicted positive there).
struct RocCurve {
    std::vector<double> fpr;
    std::vector<double> tpr;
    std::vector<double> thresholds;

    std::size_t size() const { return fpr.size(); }
};

struct EvalReport {
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    RocCurve roc;
};

/// Counts with fraud (label 1) as the positive class.
ConfusionMatrix confusion_matrix(const std::vector<int>& labels,
                                 const std::vector<int>& predictions);

/// Accuracy, precision, recall and F1. Degenerate counts follow the
/// zero conventions: precision = 0 when tp+fp = 0, recall = 0 when
/// tp+fn = 0, f1 = 0 when precision+recall = 0.
SummaryMetrics summary_metrics(const ConfusionMatrix& m);

/// Threshold sweep over the distinct scores, descending, with tied scores
/// moving together. Requires both classes present.
RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

/// Full report: confusion matrix from (score > threshold), summary metrics,
/// ROC and AUC from the raw scores.
EvalReport build_report(const std::vector<int>& labels, const std::vector<double>& scores,
                        double threshold);

}  // namespace fraudpipe
