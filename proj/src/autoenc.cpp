#include "fraudpipe/autoenc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fraudpipe/rng.hpp"

namespace fraudpipe {

void AnomalyModel::validate() const {
    network.validate();
    const auto selected = static_cast<std::size_t>(
        std::count(feature_mask.begin(), feature_mask.end(), std::uint8_t{1}));
    if (network.input_dim() != selected) {
        throw std::invalid_argument(
            "AnomalyModel: network input does not match selected feature count");
    }
    if (standardizer.n_cols() != selected) {
        throw std::invalid_argument(
            "AnomalyModel: standardizer does not match selected feature count");
    }
    if (!std::isfinite(threshold)) {
        throw std::invalid_argument("AnomalyModel: threshold must be finite");
    }
}

Network build_autoencoder(const AutoencoderSpec& spec, std::uint64_t seed) {
    if (spec.input_dim < 1) {
        throw std::invalid_argument("build_autoencoder: input_dim must be >= 1");
    }
    if (spec.hidden_dims.empty()) {
        throw std::invalid_argument("build_autoencoder: need at least one hidden layer");
    }
    for (std::size_t h : spec.hidden_dims) {
        if (h < 1) throw std::invalid_argument("build_autoencoder: hidden dims must be >= 1");
    }

    // in -> h1 -> ... -> hk -> h(k-1) -> ... -> h1 -> in
    std::vector<std::size_t> dims;
    dims.push_back(spec.input_dim);
    dims.insert(dims.end(), spec.hidden_dims.begin(), spec.hidden_dims.end());
    for (std::size_t i = spec.hidden_dims.size() - 1; i-- > 0;) {
        dims.push_back(spec.hidden_dims[i]);
    }
    dims.push_back(spec.input_dim);

    std::vector<LayerSpec> layers;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const bool last = i + 2 == dims.size();
        layers.push_back({dims[i], dims[i + 1], last ? Activation::identity : spec.activation});
    }
    return init_network(layers, seed);
}

std::vector<double> reconstruction_errors(const Network& n, const Matrix& rows) {
    if (rows.rows() > 0 && rows.cols() != n.input_dim()) {
        throw std::invalid_argument("reconstruction_errors: column count mismatch");
    }
    std::vector<double> errors;
    errors.reserve(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        const auto out = forward(n, rows.row(r));
        errors.push_back(mse_loss(rows.row(r), out));
    }
    return errors;
}

double fit_threshold(const std::vector<double>& errors, const std::vector<int>& labels,
                     const ThresholdStrategy& strategy) {
    if (errors.size() != labels.size()) {
        throw std::invalid_argument("fit_threshold: length mismatch");
    }
    if (errors.empty()) {
        throw std::invalid_argument("fit_threshold: empty input");
    }

    if (strategy.kind == ThresholdStrategy::Kind::quantile) {
        if (strategy.q < 0.0 || strategy.q > 1.0) {
            throw std::invalid_argument("fit_threshold: quantile must be in [0,1]");
        }
        std::vector<double> legit;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (labels[i] == 0) legit.push_back(errors[i]);
        }
        if (legit.empty()) {
            throw std::invalid_argument("fit_threshold: no legit rows for quantile strategy");
        }
        std::sort(legit.begin(), legit.end());
        const double pos = strategy.q * static_cast<double>(legit.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        if (lo + 1 >= legit.size()) return legit.back();
        const double frac = pos - static_cast<double>(lo);
        return legit[lo] + frac * (legit[lo + 1] - legit[lo]);
    }

    const std::size_t n_fraud =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (n_fraud == 0 || n_fraud == labels.size()) {
        throw std::invalid_argument("fit_threshold: max_f1 needs both classes");
    }

    std::vector<double> candidates = errors;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    double best_t = candidates.front();
    double best_f1 = -1.0;
    for (const double t : candidates) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            const bool pred = errors[i] > t;
            if (labels[i] == 1) {
                pred ? ++tp : ++fn;
            } else if (pred) {
                ++fp;
            }
        }
        const double precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
        const double recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
        const double f1 =
            (precision + recall) == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        if (f1 > best_f1) {  // ties keep the earlier (lower) threshold
            best_f1 = f1;
            best_t = t;
        }
    }
    return best_t;
}

std::vector<double> model_errors(const AnomalyModel& m, const Matrix& rows) {
    if (rows.rows() > 0 && rows.cols() != m.feature_mask.size()) {
        throw std::invalid_argument("model_errors: column count does not match feature mask");
    }
    Dataset staged;
    staged.features = rows;
    staged.labels.assign(rows.rows(), 0);
    for (std::size_t c = 0; c < rows.cols(); ++c) {
        staged.names.push_back("c" + std::to_string(c));
    }
    const Dataset masked = staged.select_columns(m.feature_mask);
    const Dataset standardized = apply_standardizer(masked, m.standardizer);
    return reconstruction_errors(m.network, standardized.features);
}

std::vector<int> classify(const AnomalyModel& m, const Matrix& rows) {
    const std::vector<double> errors = model_errors(m, rows);
    std::vector<int> out(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        out[i] = errors[i] > m.threshold ? 1 : 0;
    }
    return out;
}

ScoredDataset score_dataset(const AnomalyModel& m, const Dataset& d) {
    ScoredDataset result;
    result.errors = model_errors(m, d.features);
    result.report = build_report(d.labels, result.errors, m.threshold);
    return result;
}

SupervisedHeadResult train_supervised_head(const Network& autoencoder, const Matrix& inputs,
                                           const std::vector<int>& labels,
                                           const TrainConfig& cfg, std::size_t head_hidden) {
    if (autoencoder.layers.empty() || autoencoder.layers.size() % 2 != 0) {
        throw std::invalid_argument("train_supervised_head: not a mirrored autoencoder");
    }
    if (inputs.rows() != labels.size()) {
        throw std::invalid_argument("train_supervised_head: input/label mismatch");
    }
    const std::size_t encoder_layers = autoencoder.layers.size() / 2;

    Network encoder;
    encoder.layers.assign(autoencoder.layers.begin(),
                          autoencoder.layers.begin() + encoder_layers);
    encoder.weights.assign(autoencoder.weights.begin(),
                           autoencoder.weights.begin() + encoder_layers);
    encoder.biases.assign(autoencoder.biases.begin(),
                          autoencoder.biases.begin() + encoder_layers);

    const Matrix codes = predict(encoder, inputs);
    Matrix targets(labels.size(), 2);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        targets(i, 0) = labels[i] == 0 ? 1.0 : 0.0;
        targets(i, 1) = labels[i] == 1 ? 1.0 : 0.0;
    }

    const std::size_t code_dim = encoder.output_dim();
    Network head = init_network(
        {{code_dim, head_hidden, Activation::tanh}, {head_hidden, 2, Activation::identity}},
        derive_seed(cfg.seed, "supervised-head"));
    TrainResult trained = train_sgd(head, codes, targets, cfg);

    SupervisedHeadResult result;
    result.classifier = encoder;
    for (std::size_t l = 0; l < trained.network.layers.size(); ++l) {
        result.classifier.layers.push_back(trained.network.layers[l]);
        result.classifier.weights.push_back(trained.network.weights[l]);
        result.classifier.biases.push_back(trained.network.biases[l]);
    }
    result.loss_history = std::move(trained.loss_history);
    return result;
}

std::vector<double> classifier_scores(const Network& classifier, const Matrix& rows) {
    if (classifier.output_dim() != 2) {
        throw std::invalid_argument("classifier_scores: expected a two-logit classifier");
    }
    const Matrix out = predict(classifier, rows);
    std::vector<double> scores(out.rows());
    for (std::size_t r = 0; r < out.rows(); ++r) {
        scores[r] = out(r, 1) - out(r, 0);
    }
    return scores;
}

}  // namespace fraudpipe
