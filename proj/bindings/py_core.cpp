#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fraudpipe/autoenc.hpp"
#include "fraudpipe/baselines.hpp"
#include "fraudpipe/batopt.hpp"
#include "fraudpipe/dataio.hpp"
#include "fraudpipe/metrics.hpp"
#include "fraudpipe/neural.hpp"
#include "fraudpipe/pipeline.hpp"
#include "fraudpipe/serialize.hpp"

namespace py = pybind11;
using namespace fraudpipe;

namespace {

Matrix matrix_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) {
        throw std::invalid_argument("expected a 2-D array");
    }
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data());
    return m;
}

py::array_t<double> array_from_matrix(const Matrix& m) {
    py::array_t<double> a({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.rows() * m.cols(), a.mutable_data());
    return a;
}

Dataset dataset_from_python(const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
                            const std::vector<int>& labels,
                            const std::vector<std::string>& names) {
    Dataset d;
    d.features = matrix_from_array(features);
    d.labels = labels;
    if (names.empty()) {
        for (std::size_t c = 0; c < d.features.cols(); ++c) {
            d.names.push_back("f" + std::to_string(c));
        }
    } else {
        d.names = names;
    }
    d.validate();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Autoencoder anomaly scoring, binary bat feature selection and evaluation";

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&dataset_from_python), py::arg("features"), py::arg("labels"),
             py::arg("names") = std::vector<std::string>{})
        .def_property_readonly("features",
                               [](const Dataset& d) { return array_from_matrix(d.features); })
        .def_readonly("labels", &Dataset::labels)
        .def_readonly("names", &Dataset::names)
        .def("n_rows", &Dataset::n_rows)
        .def("n_cols", &Dataset::n_cols)
        .def("select_columns", &Dataset::select_columns)
        .def("__repr__", [](const Dataset& d) {
            return "Dataset(" + std::to_string(d.n_rows()) + " rows, " +
                   std::to_string(d.n_cols()) + " features)";
        });

    m.def("load_csv", &load_csv, py::arg("path"), py::arg("has_header") = true);
    m.def(
        "write_csv", [](const Dataset& d, const std::string& path) { write_csv(d, path); },
        py::arg("dataset"), py::arg("path"));
    m.def("gen_synthetic", &gen_synthetic, py::arg("n_inliers") = 5000,
          py::arg("n_outliers") = 50, py::arg("dim") = 10, py::arg("seed") = 0);

    py::class_<StandardizerParams>(m, "StandardizerParams")
        .def("to_json", [](const StandardizerParams& p) { return standardizer_to_json(p).dump(); });
    m.def(
        "fit_standardizer",
        [](const Dataset& d, const std::string& method) {
            return fit_standardizer(d, scaling_method_from_string(method));
        },
        py::arg("dataset"), py::arg("method") = "zscore");
    m.def("apply_standardizer", &apply_standardizer);

    m.def(
        "stratified_split",
        [](const Dataset& d, double train_fraction, bool stratified, std::uint64_t seed) {
            auto s = stratified_split(d, {train_fraction, stratified, seed});
            return py::make_tuple(std::move(s.train), std::move(s.test));
        },
        py::arg("dataset"), py::arg("train_fraction") = 0.75, py::arg("stratified") = true,
        py::arg("seed") = 0);
    m.def(
        "stratified_kfold",
        [](const Dataset& d, int k, std::uint64_t seed) {
            py::list folds;
            for (auto& f : stratified_kfold(d, k, seed)) {
                folds.append(py::make_tuple(std::move(f.train), std::move(f.validation)));
            }
            return folds;
        },
        py::arg("dataset"), py::arg("k") = 3, py::arg("seed") = 0);
    m.def("undersample", &undersample, py::arg("dataset"), py::arg("seed") = 0);
    m.def("smote", &smote, py::arg("dataset"), py::arg("k_neighbors") = 5,
          py::arg("target_ratio") = 1.0, py::arg("seed") = 0);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init([](double lr, int epochs, int batch_size, std::uint64_t seed,
                         bool shuffle) {
                 return TrainConfig{lr, epochs, batch_size, seed, shuffle};
             }),
             py::arg("learning_rate") = 0.01, py::arg("epochs") = 60,
             py::arg("batch_size") = 256, py::arg("seed") = 0, py::arg("shuffle") = true)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("shuffle", &TrainConfig::shuffle);

    py::class_<Network>(m, "Network")
        .def_property_readonly("input_dim", &Network::input_dim)
        .def_property_readonly("output_dim", &Network::output_dim)
        .def("to_json", [](const Network& n) { return network_to_json(n).dump(); })
        .def("__repr__", [](const Network& n) {
            std::string s = "Network(";
            for (std::size_t i = 0; i < n.layers.size(); ++i) {
                s += std::to_string(n.layers[i].in_dim) + "->";
            }
            s += n.layers.empty() ? ")" : std::to_string(n.output_dim()) + ")";
            return s;
        });
    m.def("network_from_json",
          [](const std::string& text) { return network_from_json(json::parse(text)); });

    m.def(
        "build_autoencoder",
        [](std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
           const std::string& activation, std::uint64_t seed) {
            const Activation act = activation == "sigmoid" ? Activation::sigmoid
                                                           : Activation::tanh;
            return build_autoencoder({input_dim, hidden_dims, act}, seed);
        },
        py::arg("input_dim"), py::arg("hidden_dims") = std::vector<std::size_t>{15, 15},
        py::arg("activation") = "tanh", py::arg("seed") = 0);
    m.def(
        "train_sgd",
        [](const Network& n, const py::array_t<double, py::array::c_style | py::array::forcecast>& inputs,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& targets,
           const TrainConfig& cfg) {
            auto r = train_sgd(n, matrix_from_array(inputs), matrix_from_array(targets), cfg);
            return py::make_tuple(std::move(r.network), std::move(r.loss_history));
        },
        py::arg("network"), py::arg("inputs"), py::arg("targets"), py::arg("config"));
    m.def(
        "predict",
        [](const Network& n, const py::array_t<double, py::array::c_style | py::array::forcecast>& rows) {
            return array_from_matrix(predict(n, matrix_from_array(rows)));
        },
        py::arg("network"), py::arg("rows"));
    m.def(
        "mse_loss",
        [](const std::vector<double>& y, const std::vector<double>& y_hat) {
            return mse_loss(y, y_hat);
        },
        py::arg("y"), py::arg("y_hat"));
    m.def(
        "reconstruction_errors",
        [](const Network& n, const py::array_t<double, py::array::c_style | py::array::forcecast>& rows) {
            return reconstruction_errors(n, matrix_from_array(rows));
        },
        py::arg("network"), py::arg("rows"));
    m.def(
        "fit_threshold",
        [](const std::vector<double>& errors, const std::vector<int>& labels,
           const std::string& strategy, double q) {
            const ThresholdStrategy s = strategy == "quantile"
                                            ? ThresholdStrategy::quantile(q)
                                            : ThresholdStrategy::max_f1();
            return fit_threshold(errors, labels, s);
        },
        py::arg("errors"), py::arg("labels"), py::arg("strategy") = "max_f1",
        py::arg("q") = 0.99);

    py::class_<AnomalyModel>(m, "AnomalyModel")
        .def(py::init([](Network network, StandardizerParams standardizer, double threshold,
                         std::vector<std::uint8_t> feature_mask) {
                 AnomalyModel model{std::move(network), std::move(standardizer), threshold,
                                    std::move(feature_mask)};
                 model.validate();
                 return model;
             }),
             py::arg("network"), py::arg("standardizer"), py::arg("threshold"),
             py::arg("feature_mask"))
        .def_readonly("threshold", &AnomalyModel::threshold)
        .def_readonly("feature_mask", &AnomalyModel::feature_mask)
        .def("to_json",
             [](const AnomalyModel& m_) { return model_to_json(m_, "").dump(); });
    m.def("model_from_json",
          [](const std::string& text) { return model_from_json(json::parse(text)); });
    m.def(
        "classify",
        [](const AnomalyModel& model, const py::array_t<double, py::array::c_style | py::array::forcecast>& rows) {
            return classify(model, matrix_from_array(rows));
        },
        py::arg("model"), py::arg("rows"));
    m.def(
        "score_dataset",
        [](const AnomalyModel& model, const Dataset& d) {
            auto scored = score_dataset(model, d);
            return py::make_tuple(std::move(scored.errors),
                                  report_to_json(scored.report).dump());
        },
        py::arg("model"), py::arg("dataset"));

    py::class_<BatConfig>(m, "BatConfig")
        .def(py::init<>())
        .def_readwrite("n_bats", &BatConfig::n_bats)
        .def_readwrite("f_min", &BatConfig::f_min)
        .def_readwrite("f_max", &BatConfig::f_max)
        .def_readwrite("alpha", &BatConfig::alpha)
        .def_readwrite("gamma", &BatConfig::gamma)
        .def_readwrite("r0", &BatConfig::r0)
        .def_readwrite("a0", &BatConfig::a0)
        .def_readwrite("max_iter", &BatConfig::max_iter)
        .def_readwrite("seed", &BatConfig::seed);
    m.def(
        "run_bba",
        [](const std::function<double(std::vector<std::uint8_t>)>& fitness, std::size_t dim,
           const BatConfig& cfg) {
            auto r = run_bba([&](const std::vector<std::uint8_t>& x) { return fitness(x); },
                             dim, cfg);
            return py::make_tuple(std::move(r.best_position), r.best_fitness,
                                  std::move(r.history));
        },
        py::arg("fitness"), py::arg("dim"), py::arg("config"));
    m.def(
        "select_features",
        [](const Dataset& train, const Dataset& val, const BatConfig& cfg,
           const std::vector<std::size_t>& hidden_dims, const TrainConfig& train_cfg) {
            const AutoencoderSpec spec{train.n_cols(), hidden_dims, Activation::tanh};
            auto r = select_features(train, val, cfg, spec, train_cfg);
            return py::make_tuple(std::move(r.mask), r.val_auc, std::move(r.history));
        },
        py::arg("train"), py::arg("val"), py::arg("config"), py::arg("hidden_dims"),
        py::arg("train_config"));

    m.def("confusion_matrix", [](const std::vector<int>& labels, const std::vector<int>& preds) {
        const ConfusionMatrix c = confusion_matrix(labels, preds);
        return py::dict(py::arg("tp") = c.tp, py::arg("fp") = c.fp, py::arg("tn") = c.tn,
                        py::arg("fn") = c.fn);
    });
    m.def(
        "summary_metrics",
        [](std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
            const SummaryMetrics s = summary_metrics({tp, fp, tn, fn});
            return py::dict(py::arg("accuracy") = s.accuracy, py::arg("precision") = s.precision,
                            py::arg("recall") = s.recall, py::arg("f1") = s.f1);
        },
        py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));
    m.def("roc_curve", [](const std::vector<int>& labels, const std::vector<double>& scores) {
        const RocCurve c = roc_curve(labels, scores);
        return py::make_tuple(c.fpr, c.tpr, c.thresholds);
    });
    m.def("auc", [](const std::vector<int>& labels, const std::vector<double>& scores) {
        return auc(roc_curve(labels, scores));
    });

    py::class_<LogisticModel>(m, "LogisticModel")
        .def_readonly("weights", &LogisticModel::weights)
        .def_readonly("bias", &LogisticModel::bias);
    m.def("train_logistic", &train_logistic, py::arg("dataset"), py::arg("learning_rate") = 0.1,
          py::arg("epochs") = 300, py::arg("seed") = 0);
    py::class_<TreeNode>(m, "TreeNode")
        .def("to_json", [](const TreeNode& t) { return tree_to_json(t).dump(); });
    m.def(
        "train_tree",
        [](const Dataset& d, const std::string& criterion, int max_depth, int min_leaf) {
            return train_tree(
                d, criterion == "entropy" ? SplitCriterion::entropy : SplitCriterion::gini,
                max_depth, min_leaf);
        },
        py::arg("dataset"), py::arg("criterion") = "gini", py::arg("max_depth") = 10,
        py::arg("min_leaf") = 1);
    m.def(
        "predict_logistic",
        [](const LogisticModel& model, const py::array_t<double, py::array::c_style | py::array::forcecast>& rows) {
            auto p = predict_baseline(model, matrix_from_array(rows));
            return py::make_tuple(std::move(p.scores), std::move(p.predictions));
        },
        py::arg("model"), py::arg("rows"));
    m.def(
        "predict_tree",
        [](const TreeNode& tree, const py::array_t<double, py::array::c_style | py::array::forcecast>& rows) {
            auto p = predict_baseline(tree, matrix_from_array(rows));
            return py::make_tuple(std::move(p.scores), std::move(p.predictions));
        },
        py::arg("tree"), py::arg("rows"));

    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::string& command) {
            const PipelineConfig cfg = config_from_json(json::parse(config_json));
            return run_experiment(cfg, command_from_string(command));
        },
        py::arg("config_json"), py::arg("command"),
        "Run one CLI-equivalent experiment; config_json is the same JSON the "
        "--config flag accepts.");

    py::register_exception<PipelineError>(m, "PipelineError");
}
