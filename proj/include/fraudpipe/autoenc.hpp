#pragma once

#include <cstdint>
#include <vector>

#include "fraudpipe/dataio.hpp"
#include "fraudpipe/metrics.hpp"
#include "fraudpipe/neural.hpp"

namespace fraudpipe {

struct AutoencoderSpec {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_dims = {15, 15};
    Activation activation = Activation::tanh;  // hidden layers; output is identity
};

struct ThresholdStrategy {
    enum class Kind { max_f1, quantile };
    Kind kind = Kind::max_f1;
    double q = 0.99;

    static ThresholdStrategy max_f1() { return {Kind::max_f1, 0.0}; }
    static ThresholdStrategy quantile(double q) { return {Kind::quantile, q}; }
};

/// Trained detector plus everything needed to score raw rows: the feature
/// mask over the original columns, the standardizer fitted on the selected
/// columns, and the decision threshold on the reconstruction error.
struct AnomalyModel {
    Network network;
    StandardizerParams standardizer;
    double threshold = 0.0;
    std::vector<std::uint8_t> feature_mask;

    void validate() const;
};

struct ScoredDataset {
    std::vector<double> errors;
    EvalReport report;
};

/// Mirrored chain input -> h1 -> ... -> hk -> h(k-1) -> ... -> h1 -> input.
/// The last hidden width is the bottleneck; the output layer is identity
/// regardless of spec.activation.
Network build_autoencoder(const AutoencoderSpec& spec, std::uint64_t seed);

/// Per-row mean squared reconstruction error.
std::vector<double> reconstruction_errors(const Network& n, const Matrix& rows);

/// max_f1: the candidate threshold (a distinct error value) maximizing the F1
/// of (error > t -> fraud), ties resolved toward the lower threshold.
/// quantile: linear-interpolation q-quantile of the legit-class errors.
double fit_threshold(const std::vector<double>& errors, const std::vector<int>& labels,
                     const ThresholdStrategy& strategy);

/// Mask, standardize, reconstruct; 1 where the error exceeds the threshold.
std::vector<int> classify(const AnomalyModel& m, const Matrix& rows);

/// Reconstruction errors of raw (unmasked, unstandardized) rows under the
/// model's own mask and standardizer.
std::vector<double> model_errors(const AnomalyModel& m, const Matrix& rows);

/// Errors plus a full report with the errors as ranking scores and the model
/// threshold for the confusion matrix.
ScoredDataset score_dataset(const AnomalyModel& m, const Dataset& d);

struct SupervisedHeadResult {
    Network classifier;  // encoder layers (frozen copies) + trained head
    std::vector<double> loss_history;
};

/// Optional two-logit head (code -> head_hidden -> 2) trained with MSE
/// against one-hot labels on the frozen encoder codes.
SupervisedHeadResult train_supervised_head(const Network& autoencoder, const Matrix& inputs,
                                           const std::vector<int>& labels,
                                           const TrainConfig& cfg,
                                           std::size_t head_hidden = 4);

/// Fraud-minus-legit logit per row of a classifier built by
/// train_supervised_head.
std::vector<double> classifier_scores(const Network& classifier, const Matrix& rows);

}  // namespace fraudpipe
