#include "fraudpipe/serialize.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace fraudpipe {

namespace {

constexpr int kNetworkFormatVersion = 1;
constexpr int kModelFormatVersion = 1;

std::string to_string(Activation a) {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
        case Activation::identity: return "identity";
    }
    return "tanh";
}

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "identity") return Activation::identity;
    throw std::invalid_argument("unknown activation: " + s);
}

}  // namespace

json standardizer_to_json(const StandardizerParams& p) {
    json j;
    j["method"] = to_string(p.method);
    if (p.method == ScalingMethod::zscore) {
        j["mean"] = p.col_mean;
        j["std"] = p.col_std;
    } else {
        j["min"] = p.col_min;
        j["max"] = p.col_max;
    }
    return j;
}

StandardizerParams standardizer_from_json(const json& j) {
    StandardizerParams p;
    p.method = scaling_method_from_string(j.at("method").get<std::string>());
    if (p.method == ScalingMethod::zscore) {
        p.col_mean = j.at("mean").get<std::vector<double>>();
        p.col_std = j.at("std").get<std::vector<double>>();
        if (p.col_mean.size() != p.col_std.size()) {
            throw std::invalid_argument("standardizer: mean/std length mismatch");
        }
    } else {
        p.col_min = j.at("min").get<std::vector<double>>();
        p.col_max = j.at("max").get<std::vector<double>>();
        if (p.col_min.size() != p.col_max.size()) {
            throw std::invalid_argument("standardizer: min/max length mismatch");
        }
    }
    return p;
}

json network_to_json(const Network& n) {
    json j;
    j["version"] = kNetworkFormatVersion;
    j["layers"] = json::array();
    j["weights"] = json::array();
    j["biases"] = json::array();
    for (std::size_t l = 0; l < n.layers.size(); ++l) {
        j["layers"].push_back({{"in", n.layers[l].in_dim},
                               {"out", n.layers[l].out_dim},
                               {"activation", to_string(n.layers[l].activation)}});
        j["weights"].push_back(n.weights[l].values());  // row-major
        j["biases"].push_back(n.biases[l]);
    }
    return j;
}

Network network_from_json(const json& j) {
    if (j.at("version").get<int>() != kNetworkFormatVersion) {
        throw std::invalid_argument("network: unsupported format version");
    }
    Network n;
    const auto& layers = j.at("layers");
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    if (layers.size() != weights.size() || layers.size() != biases.size()) {
        throw std::invalid_argument("network: layer/weight/bias array size mismatch");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        LayerSpec spec;
        spec.in_dim = layers[l].at("in").get<std::size_t>();
        spec.out_dim = layers[l].at("out").get<std::size_t>();
        spec.activation = activation_from_string(layers[l].at("activation").get<std::string>());
        n.layers.push_back(spec);

        const auto flat = weights[l].get<std::vector<double>>();
        if (flat.size() != spec.in_dim * spec.out_dim) {
            throw std::invalid_argument("network: weight array size mismatch at layer " +
                                        std::to_string(l));
        }
        Matrix w(spec.out_dim, spec.in_dim);
        std::copy(flat.begin(), flat.end(), w.data());
        n.weights.push_back(std::move(w));
        n.biases.push_back(biases[l].get<std::vector<double>>());
    }
    n.validate();
    return n;
}

json report_to_json(const EvalReport& r) {
    json j;
    j["confusion"] = {{"tp", r.confusion.tp},
                      {"fp", r.confusion.fp},
                      {"tn", r.confusion.tn},
                      {"fn", r.confusion.fn}};
    j["accuracy"] = r.accuracy;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    j["auc"] = r.auc;
    j["roc"] = {{"fpr", r.roc.fpr}, {"tpr", r.roc.tpr}, {"thresholds", r.roc.thresholds}};
    return j;
}

EvalReport report_from_json(const json& j) {
    EvalReport r;
    const auto& c = j.at("confusion");
    r.confusion.tp = c.at("tp").get<std::size_t>();
    r.confusion.fp = c.at("fp").get<std::size_t>();
    r.confusion.tn = c.at("tn").get<std::size_t>();
    r.confusion.fn = c.at("fn").get<std::size_t>();
    r.accuracy = j.at("accuracy").get<double>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    r.auc = j.at("auc").get<double>();
    r.roc.fpr = j.at("roc").at("fpr").get<std::vector<double>>();
    r.roc.tpr = j.at("roc").at("tpr").get<std::vector<double>>();
    r.roc.thresholds = j.at("roc").at("thresholds").get<std::vector<double>>();
    return r;
}

json model_to_json(const AnomalyModel& m, const std::string& config_hash) {
    json j;
    j["version"] = kModelFormatVersion;
    j["network"] = network_to_json(m.network);
    j["standardizer"] = standardizer_to_json(m.standardizer);
    j["threshold"] = m.threshold;
    j["feature_mask"] = m.feature_mask;
    j["config_hash"] = config_hash;
    return j;
}

AnomalyModel model_from_json(const json& j) {
    if (j.at("version").get<int>() != kModelFormatVersion) {
        throw std::invalid_argument("model: unsupported format version");
    }
    AnomalyModel m;
    m.network = network_from_json(j.at("network"));
    m.standardizer = standardizer_from_json(j.at("standardizer"));
    m.threshold = j.at("threshold").get<double>();
    m.feature_mask = j.at("feature_mask").get<std::vector<std::uint8_t>>();
    m.validate();
    return m;
}

json logistic_to_json(const LogisticModel& m) {
    return {{"type", "logistic"}, {"weights", m.weights}, {"bias", m.bias}};
}

LogisticModel logistic_from_json(const json& j) {
    LogisticModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    return m;
}

json tree_to_json(const TreeNode& t) {
    if (t.is_leaf()) {
        return {{"leaf", true}, {"p_fraud", t.p_fraud}};
    }
    json j;
    j["leaf"] = false;
    j["feature"] = t.feature;
    j["threshold"] = t.threshold;
    j["p_fraud"] = t.p_fraud;
    j["left"] = tree_to_json(*t.left);
    j["right"] = tree_to_json(*t.right);
    return j;
}

std::unique_ptr<TreeNode> tree_from_json(const json& j) {
    auto node = std::make_unique<TreeNode>();
    node->p_fraud = j.at("p_fraud").get<double>();
    if (!j.at("leaf").get<bool>()) {
        node->feature = j.at("feature").get<int>();
        node->threshold = j.at("threshold").get<double>();
        node->left = tree_from_json(j.at("left"));
        node->right = tree_from_json(j.at("right"));
    }
    return node;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace fraudpipe
