#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraudpipe/autoenc.hpp"
#include "fraudpipe/batopt.hpp"
#include "fraudpipe/dataio.hpp"
#include "fraudpipe/metrics.hpp"
#include "fraudpipe/serialize.hpp"

namespace fraudpipe {

enum class SamplingMode { none, undersample, smote };

enum class Command { train_ae, select_features, evaluate, compare, kfold, gen_synthetic };

/// Every tunable of a run in one serializable record. Field defaults follow
/// the documented experiment setup (3:1 split, z-score + tanh, two hidden
/// widths of 15, lr 0.01, 60 epochs, batch 256).
struct PipelineConfig {
    std::string data_path;
    std::string out_dir = "out";
    std::string model_path;  // evaluate: defaults to <out_dir>/model.json
    std::string mask_path;   // optional selection.json restricting features
    bool has_header = true;

    ScalingMethod standardize = ScalingMethod::zscore;
    double train_fraction = 0.75;
    double validation_fraction = 0.10;  // carved from train for threshold/fitness

    std::vector<std::size_t> hidden_dims = {15, 15};
    Activation activation = Activation::tanh;
    TrainConfig train;
    BatConfig bat;

    SamplingMode sampling = SamplingMode::none;
    int smote_k = 5;
    double smote_ratio = 1.0;
    int kfold_k = 3;
    std::vector<std::string> baselines = {"logistic", "tree-gini", "tree-entropy",
                                          "autoencoder"};
    double baseline_lr = 0.1;   // logistic regression full-batch step
    int baseline_epochs = 300;
    int tree_max_depth = 10;
    int tree_min_leaf = 5;

    std::string threshold_strategy = "max_f1";  // or "quantile"
    double threshold_quantile = 0.99;
    bool train_on_legit_only = false;
    bool supervised_head = false;

    std::uint64_t seed = 42;

    // gen-synthetic knobs
    std::size_t synth_inliers = 5000;
    std::size_t synth_outliers = 50;
    std::size_t synth_dim = 10;
    std::string synth_out_file;  // defaults to <out_dir>/synthetic.csv

    void validate() const;
};

/// One-line machine-parsable failure: category in
/// {config, data, io, model, internal}.
struct PipelineError : std::runtime_error {
    std::string category;
    PipelineError(std::string cat, const std::string& message)
        : std::runtime_error(message), category(std::move(cat)) {}
};

json config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const json& j);

std::string to_string(SamplingMode m);
SamplingMode sampling_mode_from_string(const std::string& s);
std::string to_string(Command c);
Command command_from_string(const std::string& s);

/// Gaussian inliers (a standard dim-D normal pushed through a fixed random
/// linear map) plus outliers placed 6-10 sigma out along random directions.
/// Inlier rows come first, labels 0, then the outlier rows with label 1.
Dataset gen_synthetic(std::size_t n_inliers, std::size_t n_outliers, std::size_t dim,
                      std::uint64_t seed);

void write_csv(const Dataset& d, const std::string& path);

/// Writes report.json, roc.csv and confusion.txt into dir.
void emit_report(const EvalReport& report, const std::filesystem::path& dir);

/// Runs one experiment end to end and writes its artifacts (model bundle,
/// report, ROC CSV, manifest) under cfg.out_dir. Returns 0 on success.
/// Throws PipelineError on failure.
int run_experiment(const PipelineConfig& cfg, Command which);

}  // namespace fraudpipe
