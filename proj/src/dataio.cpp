#include "fraudpipe/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fraudpipe/rng.hpp"

namespace fraudpipe {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        fields.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

// Strips whitespace, a trailing \r and surrounding double quotes (the Kaggle
// export quotes the Class column).
std::string clean_cell(std::string s) {
    auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && is_space(s[start])) ++start;
    s = s.substr(start);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

double parse_numeric(const std::string& cell, std::size_t row, std::size_t col) {
    const std::string v = clean_cell(cell);
    double out = 0.0;
    const auto* begin = v.data();
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end || v.empty()) {
        throw std::invalid_argument("load_csv: non-numeric cell at row " + std::to_string(row) +
                                    ", column " + std::to_string(col));
    }
    return out;
}

// Indices of rows carrying each label, in dataset order.
std::array<std::vector<std::size_t>, 2> indices_by_class(const Dataset& d) {
    std::array<std::vector<std::size_t>, 2> idx;
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        idx[static_cast<std::size_t>(d.labels[i])].push_back(i);
    }
    return idx;
}

}  // namespace

std::size_t Dataset::count_label(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void Dataset::validate() const {
    if (features.rows() != labels.size()) {
        throw std::invalid_argument("Dataset: row count does not match label count");
    }
    if (names.size() != features.cols()) {
        throw std::invalid_argument("Dataset: name count does not match column count");
    }
    for (int l : labels) {
        if (l != 0 && l != 1) {
            throw std::invalid_argument("Dataset: label outside {0,1}");
        }
    }
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& idx) const {
    Dataset out;
    out.names = names;
    out.features = Matrix(idx.size(), features.cols());
    out.labels.reserve(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const auto src = features.row(idx[r]);
        std::copy(src.begin(), src.end(), out.features.row(r).begin());
        out.labels.push_back(labels[idx[r]]);
    }
    return out;
}

Dataset Dataset::select_columns(const std::vector<std::uint8_t>& mask) const {
    if (mask.size() != features.cols()) {
        throw std::invalid_argument("Dataset::select_columns: mask length mismatch");
    }
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < mask.size(); ++c) {
        if (mask[c]) cols.push_back(c);
    }
    Dataset out;
    out.labels = labels;
    out.features = Matrix(features.rows(), cols.size());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out.features(r, j) = features(r, cols[j]);
        }
    }
    for (std::size_t c : cols) out.names.push_back(names[c]);
    return out;
}

Dataset load_csv(const std::string& path, bool has_header) {
    std::ifstream file(path);
    if (!file.is_open()) {
        throw std::runtime_error("load_csv: cannot open file: " + path);
    }

    Dataset d;
    std::string line;
    std::size_t data_row = 0;

    if (has_header) {
        if (!std::getline(file, line)) {
            throw std::invalid_argument("load_csv: empty file: " + path);
        }
        for (const auto& field : split_fields(line)) {
            d.names.push_back(clean_cell(field));
        }
        if (d.names.empty()) {
            throw std::invalid_argument("load_csv: empty header: " + path);
        }
        d.names.pop_back();  // last column is the label
    }

    std::vector<double> row_values;
    while (std::getline(file, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        ++data_row;
        const auto fields = split_fields(line);
        if (d.features.cols() != 0 && fields.size() != d.features.cols() + 1) {
            throw std::invalid_argument(
                "load_csv: row " + std::to_string(data_row) + " has " +
                std::to_string(fields.size()) + " fields, expected " +
                std::to_string(d.features.cols() + 1));
        }
        if (fields.size() < 2) {
            throw std::invalid_argument("load_csv: row " + std::to_string(data_row) +
                                        " has fewer than 2 fields");
        }
        row_values.clear();
        for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
            row_values.push_back(parse_numeric(fields[c], data_row, c + 1));
        }
        const double label = parse_numeric(fields.back(), data_row, fields.size());
        if (label != 0.0 && label != 1.0) {
            throw std::invalid_argument("load_csv: label outside {0,1} at row " +
                                        std::to_string(data_row));
        }
        d.features.push_row(row_values);
        d.labels.push_back(label == 1.0 ? 1 : 0);
    }

    if (d.n_rows() == 0) {
        throw std::invalid_argument("load_csv: no data rows in " + path);
    }
    if (has_header && d.names.size() != d.features.cols()) {
        throw std::invalid_argument("load_csv: header width does not match data width");
    }
    if (!has_header) {
        for (std::size_t c = 0; c < d.features.cols(); ++c) {
            d.names.push_back("f" + std::to_string(c));
        }
    }
    return d;
}

StandardizerParams fit_standardizer(const Dataset& d, ScalingMethod method) {
    if (d.n_rows() < 2) {
        throw std::invalid_argument("fit_standardizer: need at least 2 rows");
    }
    StandardizerParams p;
    p.method = method;
    const std::size_t n = d.n_rows();
    const std::size_t cols = d.n_cols();
    if (method == ScalingMethod::zscore) {
        p.col_mean.assign(cols, 0.0);
        p.col_std.assign(cols, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < cols; ++c) p.col_mean[c] += d.features(r, c);
        }
        for (std::size_t c = 0; c < cols; ++c) p.col_mean[c] /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                const double dev = d.features(r, c) - p.col_mean[c];
                p.col_std[c] += dev * dev;
            }
        }
        for (std::size_t c = 0; c < cols; ++c) {
            // Population formula; constant columns get scale 1 so they map to 0.
            p.col_std[c] = std::sqrt(p.col_std[c] / static_cast<double>(n));
            if (p.col_std[c] == 0.0) p.col_std[c] = 1.0;
        }
    } else {
        p.col_min.assign(cols, std::numeric_limits<double>::infinity());
        p.col_max.assign(cols, -std::numeric_limits<double>::infinity());
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                p.col_min[c] = std::min(p.col_min[c], d.features(r, c));
                p.col_max[c] = std::max(p.col_max[c], d.features(r, c));
            }
        }
    }
    return p;
}

Dataset apply_standardizer(const Dataset& d, const StandardizerParams& p) {
    if (d.n_cols() != p.n_cols()) {
        throw std::invalid_argument("apply_standardizer: column count mismatch");
    }
    Dataset out = d;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        for (std::size_t c = 0; c < d.n_cols(); ++c) {
            out.features(r, c) = (d.features(r, c) - p.offset(c)) / p.denom(c);
        }
    }
    return out;
}

TrainTestSplit stratified_split(const Dataset& d, const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0) {
        throw std::invalid_argument("stratified_split: train_fraction must be in (0,1)");
    }
    Rng rng(spec.seed);
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;

    if (spec.stratified) {
        auto by_class = indices_by_class(d);
        if (by_class[0].empty() || by_class[1].empty()) {
            throw std::invalid_argument("stratified_split: a class has 0 members");
        }
        for (auto& class_idx : by_class) {
            rng.shuffle(class_idx);
            const auto n_train = static_cast<std::size_t>(
                std::floor(spec.train_fraction * static_cast<double>(class_idx.size())));
            train_idx.insert(train_idx.end(), class_idx.begin(), class_idx.begin() + n_train);
            test_idx.insert(test_idx.end(), class_idx.begin() + n_train, class_idx.end());
        }
    } else {
        std::vector<std::size_t> idx(d.n_rows());
        std::iota(idx.begin(), idx.end(), 0);
        rng.shuffle(idx);
        const auto n_train = static_cast<std::size_t>(
            std::floor(spec.train_fraction * static_cast<double>(idx.size())));
        train_idx.assign(idx.begin(), idx.begin() + n_train);
        test_idx.assign(idx.begin() + n_train, idx.end());
    }

    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {d.select_rows(train_idx), d.select_rows(test_idx)};
}

std::vector<Fold> stratified_kfold(const Dataset& d, int k, std::uint64_t seed) {
    if (k < 2) {
        throw std::invalid_argument("stratified_kfold: k must be >= 2");
    }
    auto by_class = indices_by_class(d);
    for (const auto& class_idx : by_class) {
        if (class_idx.size() < static_cast<std::size_t>(k)) {
            throw std::invalid_argument("stratified_kfold: a class has fewer than k members");
        }
    }

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> fold_idx(static_cast<std::size_t>(k));
    for (auto& class_idx : by_class) {
        rng.shuffle(class_idx);
        for (std::size_t i = 0; i < class_idx.size(); ++i) {
            fold_idx[i % static_cast<std::size_t>(k)].push_back(class_idx[i]);
        }
    }

    std::vector<Fold> folds;
    folds.reserve(static_cast<std::size_t>(k));
    for (std::size_t f = 0; f < fold_idx.size(); ++f) {
        std::vector<std::size_t> val = fold_idx[f];
        std::vector<std::size_t> train;
        for (std::size_t g = 0; g < fold_idx.size(); ++g) {
            if (g == f) continue;
            train.insert(train.end(), fold_idx[g].begin(), fold_idx[g].end());
        }
        std::sort(val.begin(), val.end());
        std::sort(train.begin(), train.end());
        folds.push_back({d.select_rows(train), d.select_rows(val)});
    }
    return folds;
}

Dataset undersample(const Dataset& d, std::uint64_t seed) {
    auto by_class = indices_by_class(d);
    if (by_class[0].empty() || by_class[1].empty()) {
        throw std::invalid_argument("undersample: both classes must be present");
    }
    const std::size_t minority = by_class[0].size() <= by_class[1].size() ? 0 : 1;
    const std::size_t majority = 1 - minority;
    const std::size_t n_keep = by_class[minority].size();

    Rng rng(seed);
    rng.shuffle(by_class[majority]);

    std::vector<std::size_t> keep = by_class[minority];
    keep.insert(keep.end(), by_class[majority].begin(), by_class[majority].begin() + n_keep);
    std::sort(keep.begin(), keep.end());
    return d.select_rows(keep);
}

Dataset smote(const Dataset& d, int k_neighbors, double target_ratio, std::uint64_t seed) {
    if (k_neighbors < 1) {
        throw std::invalid_argument("smote: k_neighbors must be >= 1");
    }
    if (target_ratio <= 0.0) {
        throw std::invalid_argument("smote: target_ratio must be positive");
    }
    auto by_class = indices_by_class(d);
    if (by_class[0].empty() || by_class[1].empty()) {
        throw std::invalid_argument("smote: both classes must be present");
    }
    const std::size_t minority = by_class[0].size() <= by_class[1].size() ? 0 : 1;
    const auto& min_idx = by_class[minority];
    const std::size_t n_min = min_idx.size();
    const std::size_t n_maj = by_class[1 - minority].size();
    if (n_min <= static_cast<std::size_t>(k_neighbors)) {
        throw std::invalid_argument("smote: minority class must have more than k_neighbors rows");
    }

    const auto target_min =
        static_cast<std::size_t>(std::llround(target_ratio * static_cast<double>(n_maj)));
    const std::size_t n_new = target_min > n_min ? target_min - n_min : 0;

    const std::size_t cols = d.n_cols();
    // k nearest minority neighbours per minority row (self excluded, distance
    // ties broken by the lower dataset row index).
    std::vector<std::vector<std::size_t>> neighbors(n_min);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t a = 0; a < n_min; ++a) {
        dist.clear();
        const auto row_a = d.features.row(min_idx[a]);
        for (std::size_t b = 0; b < n_min; ++b) {
            if (b == a) continue;
            const auto row_b = d.features.row(min_idx[b]);
            double sq = 0.0;
            for (std::size_t c = 0; c < cols; ++c) {
                const double diff = row_a[c] - row_b[c];
                sq += diff * diff;
            }
            dist.emplace_back(sq, min_idx[b]);
        }
        std::sort(dist.begin(), dist.end());
        neighbors[a].reserve(static_cast<std::size_t>(k_neighbors));
        for (int j = 0; j < k_neighbors; ++j) {
            neighbors[a].push_back(dist[static_cast<std::size_t>(j)].second);
        }
    }

    Dataset out = d;
    Rng rng(seed);
    std::vector<double> synth(cols);
    for (std::size_t s = 0; s < n_new; ++s) {
        const std::size_t a = rng.index(n_min);
        const std::size_t nn = neighbors[a][rng.index(static_cast<std::size_t>(k_neighbors))];
        const double u = rng.uniform();
        const auto base = d.features.row(min_idx[a]);
        const auto other = d.features.row(nn);
        for (std::size_t c = 0; c < cols; ++c) {
            synth[c] = base[c] + u * (other[c] - base[c]);
        }
        out.features.push_row(synth);
        out.labels.push_back(static_cast<int>(minority));
    }
    return out;
}

std::string to_string(ScalingMethod m) {
    return m == ScalingMethod::zscore ? "zscore" : "minmax";
}

ScalingMethod scaling_method_from_string(const std::string& s) {
    if (s == "zscore") return ScalingMethod::zscore;
    if (s == "minmax") return ScalingMethod::minmax;
    throw std::invalid_argument("unknown scaling method: " + s);
}

}  // namespace fraudpipe
