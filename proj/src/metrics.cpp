#include "fraudpipe/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fraudpipe {

ConfusionMatrix confusion_matrix(const std::vector<int>& labels,
                                 const std::vector<int>& predictions) {
    if (labels.empty()) {
        throw std::invalid_argument("confusion_matrix: empty input");
    }
    if (labels.size() != predictions.size()) {
        throw std::invalid_argument("confusion_matrix: length mismatch");
    }
    ConfusionMatrix m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            predictions[i] == 1 ? ++m.tp : ++m.fn;
        } else {
            predictions[i] == 1 ? ++m.fp : ++m.tn;
        }
    }
    return m;
}

SummaryMetrics summary_metrics(const ConfusionMatrix& m) {
    if (m.total() == 0) {
        throw std::invalid_argument("summary_metrics: empty confusion matrix");
    }
    SummaryMetrics s;
    const auto total = static_cast<double>(m.total());
    s.accuracy = static_cast<double>(m.tp + m.tn) / total;
    s.precision = (m.tp + m.fp) == 0
                      ? 0.0
                      : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    s.recall = (m.tp + m.fn) == 0
                   ? 0.0
                   : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores) {
    if (labels.size() != scores.size()) {
        throw std::invalid_argument("roc_curve: length mismatch");
    }
    const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw std::invalid_argument("roc_curve: both classes must be present");
    }

    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    curve.thresholds.push_back(scores[order.front()] + 1.0);

    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        // Samples with equal scores move together.
        while (i < order.size() && scores[order[i]] == s) {
            labels[order[i]] == 1 ? ++tp : ++fp;
            ++i;
        }
        curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n_neg));
        curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n_pos));
        curve.thresholds.push_back(s);
    }
    return curve;
}

double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        area += (curve.fpr[i + 1] - curve.fpr[i]) * (curve.tpr[i] + curve.tpr[i + 1]) / 2.0;
    }
    return area;
}

EvalReport build_report(const std::vector<int>& labels, const std::vector<double>& scores,
                        double threshold) {
    std::vector<int> predictions(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        predictions[i] = scores[i] > threshold ? 1 : 0;
    }
    EvalReport r;
    r.confusion = confusion_matrix(labels, predictions);
    const SummaryMetrics s = summary_metrics(r.confusion);
    r.accuracy = s.accuracy;
    r.precision = s.precision;
    r.recall = s.recall;
    r.f1 = s.f1;
    r.roc = roc_curve(labels, scores);
    r.auc = auc(r.roc);
    return r;
}

}  // namespace fraudpipe
