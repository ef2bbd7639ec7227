#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fraudpipe/pipeline.hpp"

namespace {

using fraudpipe::PipelineConfig;

// Flags shared by every subcommand. Values are std::optional so that only
// flags actually passed override the config file.
struct FlagOverrides {
    std::optional<std::string> config_path;
    std::optional<std::string> data;
    std::optional<std::string> out;
    std::optional<std::string> model;
    std::optional<std::string> mask;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> sampling;
    std::optional<std::string> standardize;
    std::optional<std::string> threshold_strategy;
    std::optional<double> threshold_quantile;
    std::optional<double> train_fraction;
    std::optional<int> epochs;
    std::optional<double> learning_rate;
    std::optional<int> batch_size;
    std::optional<std::vector<std::size_t>> hidden_dims;
    std::optional<std::string> activation;
    std::optional<int> kfold_k;
    std::optional<int> smote_k;
    std::optional<double> smote_ratio;
    std::optional<int> bat_iters;
    std::optional<int> n_bats;
    std::optional<std::vector<std::string>> baselines;
    std::optional<std::size_t> rows;
    std::optional<std::size_t> outliers;
    std::optional<std::size_t> dim;
    std::optional<std::string> out_file;
    bool no_header = false;
    bool legit_only = false;
    bool supervised_head = false;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& f) {
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--data", f.data, "input CSV (last column = 0/1 class)");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "global seed");
    cmd->add_option("--sampling", f.sampling, "class rebalancing: none|under|smote");
    cmd->add_option("--standardize", f.standardize, "feature scaling: zscore|minmax");
    cmd->add_option("--train-fraction", f.train_fraction, "train split fraction (default 0.75)");
    cmd->add_option("--epochs", f.epochs, "training epochs");
    cmd->add_option("--learning-rate", f.learning_rate, "SGD learning rate");
    cmd->add_option("--batch-size", f.batch_size, "SGD batch size");
    cmd->add_option("--hidden-dims", f.hidden_dims, "encoder widths, e.g. --hidden-dims 15 15")
        ->delimiter(',');
    cmd->add_option("--activation", f.activation, "hidden activation: tanh|sigmoid");
    cmd->add_option("--threshold-strategy", f.threshold_strategy, "max_f1|quantile");
    cmd->add_option("--threshold-quantile", f.threshold_quantile, "quantile for the threshold");
    cmd->add_option("--smote-k", f.smote_k, "SMOTE neighbour count");
    cmd->add_option("--smote-ratio", f.smote_ratio, "SMOTE minority/majority target ratio");
    cmd->add_flag("--no-header", f.no_header, "CSV has no header row");
    cmd->add_flag("--legit-only", f.legit_only, "train the autoencoder on legit rows only");
}

PipelineConfig build_config(const FlagOverrides& f) {
    PipelineConfig cfg;
    if (f.config_path) {
        std::ifstream in(*f.config_path);
        if (!in) {
            throw fraudpipe::PipelineError("config", "cannot open config: " + *f.config_path);
        }
        try {
            cfg = fraudpipe::config_from_json(fraudpipe::json::parse(in));
        } catch (const std::exception& e) {
            throw fraudpipe::PipelineError("config",
                                           std::string("malformed config JSON: ") + e.what());
        }
    }
    if (f.data) cfg.data_path = *f.data;
    if (f.out) cfg.out_dir = *f.out;
    if (f.model) cfg.model_path = *f.model;
    if (f.mask) cfg.mask_path = *f.mask;
    if (f.seed) cfg.seed = *f.seed;
    if (f.sampling) cfg.sampling = fraudpipe::sampling_mode_from_string(*f.sampling);
    if (f.standardize) cfg.standardize = fraudpipe::scaling_method_from_string(*f.standardize);
    if (f.threshold_strategy) cfg.threshold_strategy = *f.threshold_strategy;
    if (f.threshold_quantile) cfg.threshold_quantile = *f.threshold_quantile;
    if (f.train_fraction) cfg.train_fraction = *f.train_fraction;
    if (f.epochs) cfg.train.epochs = *f.epochs;
    if (f.learning_rate) cfg.train.learning_rate = *f.learning_rate;
    if (f.batch_size) cfg.train.batch_size = *f.batch_size;
    if (f.hidden_dims) cfg.hidden_dims = *f.hidden_dims;
    if (f.activation) {
        if (*f.activation == "tanh") {
            cfg.activation = fraudpipe::Activation::tanh;
        } else if (*f.activation == "sigmoid") {
            cfg.activation = fraudpipe::Activation::sigmoid;
        } else {
            throw fraudpipe::PipelineError("config", "unknown activation: " + *f.activation);
        }
    }
    if (f.kfold_k) cfg.kfold_k = *f.kfold_k;
    if (f.smote_k) cfg.smote_k = *f.smote_k;
    if (f.smote_ratio) cfg.smote_ratio = *f.smote_ratio;
    if (f.bat_iters) cfg.bat.max_iter = *f.bat_iters;
    if (f.n_bats) cfg.bat.n_bats = *f.n_bats;
    if (f.baselines) cfg.baselines = *f.baselines;
    if (f.rows) cfg.synth_inliers = *f.rows;
    if (f.outliers) cfg.synth_outliers = *f.outliers;
    if (f.dim) cfg.synth_dim = *f.dim;
    if (f.out_file) cfg.synth_out_file = *f.out_file;
    if (f.no_header) cfg.has_header = false;
    if (f.legit_only) cfg.train_on_legit_only = true;
    if (f.supervised_head) cfg.supervised_head = true;
    return cfg;
}

void print_schema_hint() {
    std::cout << "Expected CSV schema: comma-separated numeric table, optional single\n"
                 "header row, last column the integer class label (0 = legit, 1 = fraud).\n"
                 "The Kaggle credit-card file (Time,V1..V28,Amount,Class) loads as-is.\n"
                 "No dataset at hand? Generate one:\n"
                 "    fraudpipe gen-synthetic --out out --rows 5000 --outliers 50 --dim 10\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transaction anomaly detection: autoencoder scoring, binary-bat feature "
                 "selection, baselines and evaluation"};
    app.require_subcommand(1);

    FlagOverrides f;
    fraudpipe::Command command = fraudpipe::Command::train_ae;

    auto* train_ae = app.add_subcommand("train-ae", "train the autoencoder and score the test split");
    add_common_flags(train_ae, f);
    train_ae->add_option("--mask", f.mask, "selection.json restricting the feature set");
    train_ae->add_flag("--supervised-head", f.supervised_head,
                       "also train the optional two-logit classifier head");
    train_ae->callback([&] { command = fraudpipe::Command::train_ae; });

    auto* select = app.add_subcommand("select-features", "binary bat wrapper feature selection");
    add_common_flags(select, f);
    select->add_option("--bat-iters", f.bat_iters, "bat algorithm iterations");
    select->add_option("--n-bats", f.n_bats, "swarm size");
    select->callback([&] { command = fraudpipe::Command::select_features; });

    auto* evaluate = app.add_subcommand("evaluate", "score the test split with a saved model");
    add_common_flags(evaluate, f);
    evaluate->add_option("--model", f.model, "model.json path (default <out>/model.json)");
    evaluate->callback([&] { command = fraudpipe::Command::evaluate; });

    auto* compare = app.add_subcommand("compare", "run the configured methods on one split");
    add_common_flags(compare, f);
    compare->add_option("--mask", f.mask, "selection.json restricting the feature set");
    compare->add_option("--baseline", f.baselines,
                        "methods: logistic tree-gini tree-entropy autoencoder")
        ->delimiter(',');
    compare->callback([&] { command = fraudpipe::Command::compare; });

    auto* kfold = app.add_subcommand("kfold", "stratified k-fold evaluation of the methods");
    add_common_flags(kfold, f);
    kfold->add_option("--k", f.kfold_k, "fold count (default 3)");
    kfold->add_option("--mask", f.mask, "selection.json restricting the feature set");
    kfold->add_option("--baseline", f.baselines,
                      "methods: logistic tree-gini tree-entropy autoencoder")
        ->delimiter(',');
    kfold->callback([&] { command = fraudpipe::Command::kfold; });

    auto* gen = app.add_subcommand("gen-synthetic",
                                   "write a Gaussian inlier/outlier CSV for offline testing");
    add_common_flags(gen, f);
    gen->add_option("--rows", f.rows, "inlier count (default 5000)");
    gen->add_option("--outliers", f.outliers, "outlier count (default 50)");
    gen->add_option("--dim", f.dim, "feature count (default 10)");
    gen->add_option("--out-file", f.out_file, "CSV path (default <out>/synthetic.csv)");
    gen->callback([&] { command = fraudpipe::Command::gen_synthetic; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code != 0) {
            std::cerr << "error: config: invalid command line\n";
        }
        return code;
    }

    try {
        const PipelineConfig cfg = build_config(f);
        if (command != fraudpipe::Command::gen_synthetic && cfg.data_path.empty()) {
            print_schema_hint();
            throw fraudpipe::PipelineError("config", "no data file given (--data)");
        }
        return fraudpipe::run_experiment(cfg, command);
    } catch (const fraudpipe::PipelineError& e) {
        std::cerr << "error: " << e.category << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
