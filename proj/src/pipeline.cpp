#include "fraudpipe/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "fraudpipe/baselines.hpp"
#include "fraudpipe/rng.hpp"

namespace fraudpipe {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw PipelineError("io", "cannot open for writing: " + path.string());
    }
    out << content;
    if (!out) {
        throw PipelineError("io", "write failed: " + path.string());
    }
}

json read_json_file(const fs::path& path, const std::string& category) {
    std::ifstream in(path);
    if (!in) {
        throw PipelineError(category, "cannot open: " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        throw PipelineError(category, "malformed JSON in " + path.string() + ": " + e.what());
    }
}

std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(now() - start).count();
}

Dataset filter_legit(const Dataset& d) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        if (d.labels[i] == 0) keep.push_back(i);
    }
    return d.select_rows(keep);
}

}  // namespace

void PipelineConfig::validate() const {
    if (train_fraction <= 0.0 || train_fraction >= 1.0) {
        throw std::invalid_argument("train_fraction must be in (0,1)");
    }
    if (validation_fraction <= 0.0 || validation_fraction >= 1.0) {
        throw std::invalid_argument("validation_fraction must be in (0,1)");
    }
    if (hidden_dims.empty()) {
        throw std::invalid_argument("hidden_dims must not be empty");
    }
    for (std::size_t h : hidden_dims) {
        if (h < 1) throw std::invalid_argument("hidden_dims entries must be >= 1");
    }
    if (smote_k < 1) throw std::invalid_argument("smote_k must be >= 1");
    if (smote_ratio <= 0.0) throw std::invalid_argument("smote_ratio must be positive");
    if (kfold_k < 2) throw std::invalid_argument("kfold_k must be >= 2");
    if (threshold_strategy != "max_f1" && threshold_strategy != "quantile") {
        throw std::invalid_argument("threshold_strategy must be max_f1 or quantile");
    }
    if (threshold_quantile < 0.0 || threshold_quantile > 1.0) {
        throw std::invalid_argument("threshold_quantile must be in [0,1]");
    }
    for (const auto& b : baselines) {
        if (b != "logistic" && b != "tree-gini" && b != "tree-entropy" && b != "autoencoder") {
            throw std::invalid_argument("unknown baseline: " + b);
        }
    }
    if (baseline_lr <= 0.0) throw std::invalid_argument("baseline_lr must be positive");
    if (baseline_epochs < 1) throw std::invalid_argument("baseline_epochs must be >= 1");
    if (tree_max_depth < 1) throw std::invalid_argument("tree_max_depth must be >= 1");
    if (tree_min_leaf < 1) throw std::invalid_argument("tree_min_leaf must be >= 1");
    if (synth_dim < 1) throw std::invalid_argument("synth_dim must be >= 1");
    train.validate();
    bat.validate();
}

std::string to_string(SamplingMode m) {
    switch (m) {
        case SamplingMode::none: return "none";
        case SamplingMode::undersample: return "under";
        case SamplingMode::smote: return "smote";
    }
    return "none";
}

SamplingMode sampling_mode_from_string(const std::string& s) {
    if (s == "none") return SamplingMode::none;
    if (s == "under") return SamplingMode::undersample;
    if (s == "smote") return SamplingMode::smote;
    throw std::invalid_argument("unknown sampling mode: " + s);
}

std::string to_string(Command c) {
    switch (c) {
        case Command::train_ae: return "train-ae";
        case Command::select_features: return "select-features";
        case Command::evaluate: return "evaluate";
        case Command::compare: return "compare";
        case Command::kfold: return "kfold";
        case Command::gen_synthetic: return "gen-synthetic";
    }
    return "train-ae";
}

Command command_from_string(const std::string& s) {
    if (s == "train-ae") return Command::train_ae;
    if (s == "select-features") return Command::select_features;
    if (s == "evaluate") return Command::evaluate;
    if (s == "compare") return Command::compare;
    if (s == "kfold") return Command::kfold;
    if (s == "gen-synthetic") return Command::gen_synthetic;
    throw std::invalid_argument("unknown command: " + s);
}

namespace {

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
        case Activation::identity: return "identity";
    }
    return "tanh";
}

Activation activation_from_name(const std::string& s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "identity") return Activation::identity;
    throw std::invalid_argument("unknown activation: " + s);
}

}  // namespace

json config_to_json(const PipelineConfig& cfg) {
    json j;
    j["data"] = cfg.data_path;
    j["out"] = cfg.out_dir;
    j["model"] = cfg.model_path;
    j["mask"] = cfg.mask_path;
    j["has_header"] = cfg.has_header;
    j["standardize"] = to_string(cfg.standardize);
    j["train_fraction"] = cfg.train_fraction;
    j["validation_fraction"] = cfg.validation_fraction;
    j["hidden_dims"] = cfg.hidden_dims;
    j["activation"] = activation_name(cfg.activation);
    j["train"] = {{"learning_rate", cfg.train.learning_rate},
                  {"epochs", cfg.train.epochs},
                  {"batch_size", cfg.train.batch_size},
                  {"shuffle", cfg.train.shuffle}};
    j["bat"] = {{"n_bats", cfg.bat.n_bats}, {"f_min", cfg.bat.f_min},
                {"f_max", cfg.bat.f_max},   {"alpha", cfg.bat.alpha},
                {"gamma", cfg.bat.gamma},   {"r0", cfg.bat.r0},
                {"a0", cfg.bat.a0},         {"max_iter", cfg.bat.max_iter}};
    j["sampling"] = to_string(cfg.sampling);
    j["smote_k"] = cfg.smote_k;
    j["smote_ratio"] = cfg.smote_ratio;
    j["kfold_k"] = cfg.kfold_k;
    j["baselines"] = cfg.baselines;
    j["baseline_lr"] = cfg.baseline_lr;
    j["baseline_epochs"] = cfg.baseline_epochs;
    j["tree_max_depth"] = cfg.tree_max_depth;
    j["tree_min_leaf"] = cfg.tree_min_leaf;
    j["threshold_strategy"] = cfg.threshold_strategy;
    j["threshold_quantile"] = cfg.threshold_quantile;
    j["train_on_legit_only"] = cfg.train_on_legit_only;
    j["supervised_head"] = cfg.supervised_head;
    j["seed"] = cfg.seed;
    j["synth_inliers"] = cfg.synth_inliers;
    j["synth_outliers"] = cfg.synth_outliers;
    j["synth_dim"] = cfg.synth_dim;
    j["synth_out_file"] = cfg.synth_out_file;
    return j;
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig cfg;
    cfg.data_path = j.value("data", cfg.data_path);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.model_path = j.value("model", cfg.model_path);
    cfg.mask_path = j.value("mask", cfg.mask_path);
    cfg.has_header = j.value("has_header", cfg.has_header);
    if (j.contains("standardize")) {
        cfg.standardize = scaling_method_from_string(j.at("standardize").get<std::string>());
    }
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    cfg.validation_fraction = j.value("validation_fraction", cfg.validation_fraction);
    if (j.contains("hidden_dims")) {
        cfg.hidden_dims = j.at("hidden_dims").get<std::vector<std::size_t>>();
    }
    if (j.contains("activation")) {
        cfg.activation = activation_from_name(j.at("activation").get<std::string>());
    }
    if (j.contains("train")) {
        const auto& t = j.at("train");
        cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
        cfg.train.epochs = t.value("epochs", cfg.train.epochs);
        cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
        cfg.train.shuffle = t.value("shuffle", cfg.train.shuffle);
    }
    if (j.contains("bat")) {
        const auto& b = j.at("bat");
        cfg.bat.n_bats = b.value("n_bats", cfg.bat.n_bats);
        cfg.bat.f_min = b.value("f_min", cfg.bat.f_min);
        cfg.bat.f_max = b.value("f_max", cfg.bat.f_max);
        cfg.bat.alpha = b.value("alpha", cfg.bat.alpha);
        cfg.bat.gamma = b.value("gamma", cfg.bat.gamma);
        cfg.bat.r0 = b.value("r0", cfg.bat.r0);
        cfg.bat.a0 = b.value("a0", cfg.bat.a0);
        cfg.bat.max_iter = b.value("max_iter", cfg.bat.max_iter);
    }
    if (j.contains("sampling")) {
        cfg.sampling = sampling_mode_from_string(j.at("sampling").get<std::string>());
    }
    cfg.smote_k = j.value("smote_k", cfg.smote_k);
    cfg.smote_ratio = j.value("smote_ratio", cfg.smote_ratio);
    cfg.kfold_k = j.value("kfold_k", cfg.kfold_k);
    if (j.contains("baselines")) {
        cfg.baselines = j.at("baselines").get<std::vector<std::string>>();
    }
    cfg.baseline_lr = j.value("baseline_lr", cfg.baseline_lr);
    cfg.baseline_epochs = j.value("baseline_epochs", cfg.baseline_epochs);
    cfg.tree_max_depth = j.value("tree_max_depth", cfg.tree_max_depth);
    cfg.tree_min_leaf = j.value("tree_min_leaf", cfg.tree_min_leaf);
    cfg.threshold_strategy = j.value("threshold_strategy", cfg.threshold_strategy);
    cfg.threshold_quantile = j.value("threshold_quantile", cfg.threshold_quantile);
    cfg.train_on_legit_only = j.value("train_on_legit_only", cfg.train_on_legit_only);
    cfg.supervised_head = j.value("supervised_head", cfg.supervised_head);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.synth_inliers = j.value("synth_inliers", cfg.synth_inliers);
    cfg.synth_outliers = j.value("synth_outliers", cfg.synth_outliers);
    cfg.synth_dim = j.value("synth_dim", cfg.synth_dim);
    cfg.synth_out_file = j.value("synth_out_file", cfg.synth_out_file);
    return cfg;
}

Dataset gen_synthetic(std::size_t n_inliers, std::size_t n_outliers, std::size_t dim,
                      std::uint64_t seed) {
    if (dim < 1) {
        throw std::invalid_argument("gen_synthetic: dim must be >= 1");
    }
    Rng rng(seed);
    Matrix map(dim, dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            map(r, c) = rng.normal() * scale;
        }
    }

    Dataset d;
    std::vector<double> z(dim);
    std::vector<double> x(dim);
    const auto push_mapped = [&](int label) {
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                x[r] += map(r, c) * z[c];
            }
        }
        d.features.push_row(x);
        d.labels.push_back(label);
    };

    for (std::size_t i = 0; i < n_inliers; ++i) {
        for (auto& v : z) v = rng.normal();
        push_mapped(0);
    }
    // Outliers sit 6-10 sigma from the origin along a random direction; the
    // inlier latent projects onto any unit direction as a standard normal.
    for (std::size_t i = 0; i < n_outliers; ++i) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& v : z) {
                v = rng.normal();
                norm += v * v;
            }
            norm = std::sqrt(norm);
        } while (norm < 1e-9);
        const double radius = rng.uniform(6.0, 10.0);
        for (auto& v : z) v *= radius / norm;
        push_mapped(1);
    }

    for (std::size_t c = 0; c < dim; ++c) {
        d.names.push_back("f" + std::to_string(c));
    }
    return d;
}

void write_csv(const Dataset& d, const std::string& path) {
    std::ostringstream out;
    for (std::size_t c = 0; c < d.names.size(); ++c) {
        out << d.names[c] << ',';
    }
    out << "Class\n";
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        const auto row = d.features.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << format_double(row[c]) << ',';
        }
        out << d.labels[r] << '\n';
    }
    write_text_file(path, out.str());
}

void emit_report(const EvalReport& report, const fs::path& dir) {
    write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");

    std::ostringstream roc;
    roc << "fpr,tpr\n";
    for (std::size_t i = 0; i < report.roc.size(); ++i) {
        roc << format_double(report.roc.fpr[i]) << ',' << format_double(report.roc.tpr[i])
            << '\n';
    }
    write_text_file(dir / "roc.csv", roc.str());

    const auto& m = report.confusion;
    const std::size_t width =
        std::max<std::size_t>(6, std::to_string(std::max({m.tp, m.fp, m.tn, m.fn})).size() + 2);
    std::ostringstream table;
    table << std::setw(14) << "" << std::setw(static_cast<int>(width)) << "pred_0"
          << std::setw(static_cast<int>(width)) << "pred_1" << '\n';
    table << std::setw(14) << "actual_0" << std::setw(static_cast<int>(width)) << m.tn
          << std::setw(static_cast<int>(width)) << m.fp << '\n';
    table << std::setw(14) << "actual_1" << std::setw(static_cast<int>(width)) << m.fn
          << std::setw(static_cast<int>(width)) << m.tp << '\n';
    write_text_file(dir / "confusion.txt", table.str());
}

namespace {

// Everything an experiment needs after loading, masking, standardizing,
// sampling and carving the threshold-validation subset.
struct PreparedData {
    std::vector<std::string> names;       // original column names
    std::vector<std::uint8_t> mask;       // over original columns
    StandardizerParams standardizer;      // fitted on masked training columns
    Dataset train_std;                    // standardized masked train (sampled)
    Dataset fit_train;                    // train_std minus the validation carve
    Dataset val;                          // threshold/fitness validation carve
    Dataset test_raw;                     // untouched test rows, original columns
    Dataset test_std;                     // standardized masked test
};

Dataset load_data(const PipelineConfig& cfg) {
    if (cfg.data_path.empty()) {
        throw PipelineError("config", "no data file given (--data)");
    }
    try {
        Dataset d = load_csv(cfg.data_path, cfg.has_header);
        d.validate();
        return d;
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError("data", e.what());
    }
}

std::vector<std::uint8_t> load_mask(const PipelineConfig& cfg, std::size_t n_cols) {
    if (cfg.mask_path.empty()) {
        return std::vector<std::uint8_t>(n_cols, 1);
    }
    const json j = read_json_file(cfg.mask_path, "model");
    std::vector<std::uint8_t> mask;
    try {
        mask = j.at("mask").get<std::vector<std::uint8_t>>();
    } catch (const std::exception& e) {
        throw PipelineError("model", std::string("bad mask file: ") + e.what());
    }
    if (mask.size() != n_cols) {
        throw PipelineError("model", "mask length does not match data column count");
    }
    if (std::count(mask.begin(), mask.end(), std::uint8_t{1}) == 0) {
        throw PipelineError("model", "mask selects no features");
    }
    return mask;
}

Dataset apply_sampling(const Dataset& d, const PipelineConfig& cfg, std::uint64_t seed) {
    switch (cfg.sampling) {
        case SamplingMode::none: return d;
        case SamplingMode::undersample: return undersample(d, seed);
        case SamplingMode::smote: return smote(d, cfg.smote_k, cfg.smote_ratio, seed);
    }
    return d;
}

PreparedData prepare(const PipelineConfig& cfg, const Dataset& full,
                     const std::vector<std::uint8_t>& mask) {
    PreparedData p;
    p.names = full.names;
    p.mask = mask;

    const TrainTestSplit split = stratified_split(
        full, {cfg.train_fraction, true, derive_seed(cfg.seed, "split")});
    p.test_raw = split.test;

    const Dataset train_masked = split.train.select_columns(mask);
    p.standardizer = fit_standardizer(train_masked, cfg.standardize);
    p.train_std = apply_standardizer(train_masked, p.standardizer);
    p.test_std = apply_standardizer(split.test.select_columns(mask), p.standardizer);

    // Carve the validation subset before sampling so thresholds are fitted on
    // the natural class distribution.
    const TrainTestSplit carve = stratified_split(
        p.train_std, {1.0 - cfg.validation_fraction, true, derive_seed(cfg.seed, "val-split")});
    p.val = carve.test;
    p.fit_train = apply_sampling(carve.train, cfg, derive_seed(cfg.seed, "sampling"));
    p.train_std = apply_sampling(p.train_std, cfg, derive_seed(cfg.seed, "sampling"));
    return p;
}

ThresholdStrategy threshold_strategy(const PipelineConfig& cfg) {
    if (cfg.threshold_strategy == "quantile") {
        return ThresholdStrategy::quantile(cfg.threshold_quantile);
    }
    return ThresholdStrategy::max_f1();
}

AnomalyModel train_anomaly_model(const PipelineConfig& cfg, const PreparedData& p) {
    const Dataset& base = cfg.train_on_legit_only
                              ? filter_legit(p.fit_train)
                              : p.fit_train;

    AutoencoderSpec spec{p.fit_train.n_cols(), cfg.hidden_dims, cfg.activation};
    Network net = build_autoencoder(spec, derive_seed(cfg.seed, "ae-init"));
    TrainConfig train_cfg = cfg.train;
    train_cfg.seed = derive_seed(cfg.seed, "ae-sgd");
    // The training path sees only the feature matrix, never the labels.
    const TrainResult trained = train_sgd(net, base.features, base.features, train_cfg);

    const std::vector<double> val_errors =
        reconstruction_errors(trained.network, p.val.features);
    const double threshold = fit_threshold(val_errors, p.val.labels, threshold_strategy(cfg));

    AnomalyModel model;
    model.network = trained.network;
    model.standardizer = p.standardizer;
    model.threshold = threshold;
    model.feature_mask = p.mask;
    model.validate();
    return model;
}

EvalReport baseline_report(const PipelineConfig& cfg, const std::string& method,
                           const Dataset& train, const Dataset& test) {
    if (method == "logistic") {
        const LogisticModel m = train_logistic(train, cfg.baseline_lr, cfg.baseline_epochs,
                                               derive_seed(cfg.seed, "logistic"));
        const BaselinePrediction pred = predict_baseline(m, test.features);
        return build_report(test.labels, pred.scores, 0.5);
    }
    const SplitCriterion criterion =
        method == "tree-gini" ? SplitCriterion::gini : SplitCriterion::entropy;
    const auto tree = train_tree(train, criterion, cfg.tree_max_depth, cfg.tree_min_leaf);
    const BaselinePrediction pred = predict_baseline(*tree, test.features);
    return build_report(test.labels, pred.scores, 0.5);
}

struct Manifest {
    std::string command;
    json config;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
    json extra = json::object();
    double total_seconds = 0.0;
};

void write_manifest(const fs::path& dir, const Manifest& m) {
    json j;
    j["command"] = m.command;
    j["config"] = m.config;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["artifacts"] = m.artifacts;
    for (auto it = m.extra.begin(); it != m.extra.end(); ++it) {
        j[it.key()] = it.value();
    }
    j["timings"] = {{"total_seconds", m.total_seconds}};
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace

int run_experiment(const PipelineConfig& cfg, Command which) {
    const auto start = now();
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw PipelineError("config", e.what());
    }

    const fs::path out_dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw PipelineError("io", "cannot create output directory: " + out_dir.string());
    }

    Manifest manifest;
    manifest.command = to_string(which);
    manifest.config = config_to_json(cfg);
    manifest.config_hash = fnv1a_hex(manifest.config.dump());
    manifest.seed = cfg.seed;

    switch (which) {
        case Command::gen_synthetic: {
            const Dataset d =
                gen_synthetic(cfg.synth_inliers, cfg.synth_outliers, cfg.synth_dim, cfg.seed);
            const std::string path = cfg.synth_out_file.empty()
                                         ? (out_dir / "synthetic.csv").string()
                                         : cfg.synth_out_file;
            write_csv(d, path);
            manifest.artifacts.push_back(path);
            break;
        }
        case Command::train_ae: {
            const Dataset full = load_data(cfg);
            const auto mask = load_mask(cfg, full.n_cols());
            const PreparedData p = prepare(cfg, full, mask);
            const AnomalyModel model = train_anomaly_model(cfg, p);
            write_text_file(out_dir / "model.json",
                            model_to_json(model, manifest.config_hash).dump(2) + "\n");
            const ScoredDataset scored = score_dataset(model, p.test_raw);
            emit_report(scored.report, out_dir);
            manifest.artifacts = {"model.json", "report.json", "roc.csv", "confusion.txt"};
            manifest.extra["mask"] = model.feature_mask;
            manifest.extra["threshold"] = model.threshold;
            manifest.extra["test_auc"] = scored.report.auc;
            if (cfg.supervised_head) {
                TrainConfig head_cfg = cfg.train;
                head_cfg.seed = derive_seed(cfg.seed, "head");
                const SupervisedHeadResult head = train_supervised_head(
                    model.network, p.fit_train.features, p.fit_train.labels, head_cfg);
                const std::vector<double> scores =
                    classifier_scores(head.classifier, p.test_std.features);
                const EvalReport head_report = build_report(p.test_raw.labels, scores, 0.0);
                write_text_file(out_dir / "head_report.json",
                                report_to_json(head_report).dump(2) + "\n");
                manifest.artifacts.push_back("head_report.json");
                manifest.extra["head_test_auc"] = head_report.auc;
            }
            break;
        }
        case Command::select_features: {
            const Dataset full = load_data(cfg);
            const auto mask = std::vector<std::uint8_t>(full.n_cols(), 1);
            const PreparedData p = prepare(cfg, full, mask);
            BatConfig bat_cfg = cfg.bat;
            bat_cfg.seed = derive_seed(cfg.seed, "bat");
            TrainConfig wrapper_cfg = cfg.train;
            wrapper_cfg.seed = derive_seed(cfg.seed, "wrapper-sgd");
            AutoencoderSpec spec{p.fit_train.n_cols(), cfg.hidden_dims, cfg.activation};
            const FeatureSelectionResult sel =
                select_features(p.fit_train, p.val, bat_cfg, spec, wrapper_cfg);

            json sel_json;
            sel_json["mask"] = sel.mask;
            sel_json["val_auc"] = sel.val_auc;
            sel_json["history"] = sel.history;
            sel_json["evaluations"] = sel.evaluations;
            sel_json["trained_models"] = sel.trained_models;
            json dropped = json::array();
            for (std::size_t c = 0; c < sel.mask.size(); ++c) {
                if (!sel.mask[c]) dropped.push_back(p.names[c]);
            }
            sel_json["dropped_features"] = dropped;
            write_text_file(out_dir / "selection.json", sel_json.dump(2) + "\n");
            manifest.artifacts = {"selection.json"};
            manifest.extra["mask"] = sel.mask;
            manifest.extra["val_auc"] = sel.val_auc;
            break;
        }
        case Command::evaluate: {
            const std::string model_path = cfg.model_path.empty()
                                               ? (out_dir / "model.json").string()
                                               : cfg.model_path;
            AnomalyModel model;
            try {
                model = model_from_json(read_json_file(model_path, "model"));
            } catch (const PipelineError&) {
                throw;
            } catch (const std::exception& e) {
                throw PipelineError("model", e.what());
            }
            const Dataset full = load_data(cfg);
            if (full.n_cols() != model.feature_mask.size()) {
                throw PipelineError("model", "model mask does not match data column count");
            }
            const TrainTestSplit split = stratified_split(
                full, {cfg.train_fraction, true, derive_seed(cfg.seed, "split")});
            ScoredDataset scored;
            try {
                scored = score_dataset(model, split.test);
            } catch (const std::exception& e) {
                throw PipelineError("data", e.what());
            }
            emit_report(scored.report, out_dir);
            manifest.artifacts = {"report.json", "roc.csv", "confusion.txt"};
            manifest.extra["mask"] = model.feature_mask;
            manifest.extra["model"] = model_path;
            manifest.extra["test_auc"] = scored.report.auc;
            break;
        }
        case Command::compare: {
            const Dataset full = load_data(cfg);
            const auto mask = load_mask(cfg, full.n_cols());
            const PreparedData p = prepare(cfg, full, mask);
            json methods = json::object();
            for (const auto& method : cfg.baselines) {
                EvalReport report;
                if (method == "autoencoder") {
                    const AnomalyModel model = train_anomaly_model(cfg, p);
                    report = score_dataset(model, p.test_raw).report;
                } else {
                    report = baseline_report(cfg, method, p.train_std, p.test_std);
                }
                methods[method] = report_to_json(report);

                std::ostringstream roc;
                roc << "fpr,tpr\n";
                for (std::size_t i = 0; i < report.roc.size(); ++i) {
                    roc << format_double(report.roc.fpr[i]) << ','
                        << format_double(report.roc.tpr[i]) << '\n';
                }
                const std::string roc_name = "roc_" + method + ".csv";
                write_text_file(out_dir / roc_name, roc.str());
                manifest.artifacts.push_back(roc_name);
            }
            write_text_file(out_dir / "compare.json",
                            json{{"methods", methods}}.dump(2) + "\n");
            manifest.artifacts.insert(manifest.artifacts.begin(), "compare.json");
            break;
        }
        case Command::kfold: {
            const Dataset full = load_data(cfg);
            const auto mask = load_mask(cfg, full.n_cols());
            const Dataset masked = full.select_columns(mask);
            const std::vector<Fold> folds =
                stratified_kfold(masked, cfg.kfold_k, derive_seed(cfg.seed, "kfold"));

            json fold_reports = json::array();
            std::map<std::string, std::vector<double>> auc_by_method;
            for (std::size_t f = 0; f < folds.size(); ++f) {
                const StandardizerParams std_params =
                    fit_standardizer(folds[f].train, cfg.standardize);
                Dataset train_std = apply_standardizer(folds[f].train, std_params);
                const Dataset val_std = apply_standardizer(folds[f].validation, std_params);
                train_std = apply_sampling(
                    train_std, cfg, derive_seed(cfg.seed, "sampling-fold" + std::to_string(f)));

                json per_method = json::object();
                for (const auto& method : cfg.baselines) {
                    EvalReport report;
                    if (method == "autoencoder") {
                        // Threshold fitted on a carve of the fold's training part.
                        const TrainTestSplit carve = stratified_split(
                            train_std, {1.0 - cfg.validation_fraction, true,
                                        derive_seed(cfg.seed, "val-fold" + std::to_string(f))});
                        AutoencoderSpec spec{train_std.n_cols(), cfg.hidden_dims,
                                             cfg.activation};
                        Network net = build_autoencoder(
                            spec, derive_seed(cfg.seed, "ae-init-fold" + std::to_string(f)));
                        TrainConfig train_cfg = cfg.train;
                        train_cfg.seed = derive_seed(cfg.seed, "ae-sgd-fold" + std::to_string(f));
                        const Dataset& base = cfg.train_on_legit_only
                                                  ? filter_legit(carve.train)
                                                  : carve.train;
                        const TrainResult trained =
                            train_sgd(net, base.features, base.features, train_cfg);
                        const auto val_errors =
                            reconstruction_errors(trained.network, carve.test.features);
                        const double threshold =
                            fit_threshold(val_errors, carve.test.labels, threshold_strategy(cfg));
                        const auto errors =
                            reconstruction_errors(trained.network, val_std.features);
                        report = build_report(val_std.labels, errors, threshold);
                    } else {
                        report = baseline_report(cfg, method, train_std, val_std);
                    }
                    per_method[method] = report_to_json(report);
                    auc_by_method[method].push_back(report.auc);
                }
                fold_reports.push_back(per_method);
            }

            json summary = json::object();
            for (const auto& [method, aucs] : auc_by_method) {
                double mean = 0.0;
                std::size_t best = 0;
                for (std::size_t i = 0; i < aucs.size(); ++i) {
                    mean += aucs[i];
                    if (aucs[i] > aucs[best]) best = i;
                }
                summary[method] = {{"mean_auc", mean / static_cast<double>(aucs.size())},
                                   {"best_fold", best},
                                   {"best_auc", aucs[best]}};
            }
            write_text_file(out_dir / "kfold.json",
                            json{{"folds", fold_reports}, {"summary", summary}}.dump(2) + "\n");
            manifest.artifacts = {"kfold.json"};
            break;
        }
    }

    manifest.total_seconds = seconds_since(start);
    write_manifest(out_dir, manifest);
    return 0;
}

}  // namespace fraudpipe
