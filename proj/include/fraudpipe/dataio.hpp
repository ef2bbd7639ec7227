#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraudpipe/matrix.hpp"

namespace fraudpipe {

/// A labelled transaction table: one feature row per transaction plus a
/// binary label (1 = fraud).
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> names;

    std::size_t n_rows() const { return features.rows(); }
    std::size_t n_cols() const { return features.cols(); }

    std::size_t count_label(int label) const;

    /// Throws std::invalid_argument when the row/label/name invariants are
    /// broken or a label is outside {0,1}.
    void validate() const;

    Dataset select_rows(const std::vector<std::size_t>& idx) const;
    Dataset select_columns(const std::vector<std::uint8_t>& mask) const;
};

enum class ScalingMethod { zscore, minmax };

struct StandardizerParams {
    ScalingMethod method = ScalingMethod::zscore;
    std::vector<double> col_mean;  // zscore
    std::vector<double> col_std;   // zscore; degenerate columns stored as 1
    std::vector<double> col_min;   // minmax
    std::vector<double> col_max;   // minmax

    std::size_t n_cols() const {
        return method == ScalingMethod::zscore ? col_mean.size() : col_min.size();
    }
    double offset(std::size_t c) const {
        return method == ScalingMethod::zscore ? col_mean[c] : col_min[c];
    }
    /// Divisor with the degenerate-column guard applied (never zero).
    double denom(std::size_t c) const {
        if (method == ScalingMethod::zscore) return col_std[c];
        const double range = col_max[c] - col_min[c];
        return range == 0.0 ? 1.0 : range;
    }
};

struct SplitSpec {
    double train_fraction = 0.75;
    bool stratified = true;
    std::uint64_t seed = 0;
};

struct TrainTestSplit {
    Dataset train;
    Dataset test;
};

struct Fold {
    Dataset train;
    Dataset validation;
};

/// Reads a comma-separated numeric table whose last column is the 0/1 class
/// label. Cell errors are reported with 1-based (row, column) positions,
/// rows counted from the first data row.
Dataset load_csv(const std::string& path, bool has_header);

/// Per-column statistics over all rows of d. zscore uses the population
/// standard deviation (divide by N); columns with zero spread get scale 1 so
/// they standardize to 0.
StandardizerParams fit_standardizer(const Dataset& d, ScalingMethod method);

Dataset apply_standardizer(const Dataset& d, const StandardizerParams& p);

/// Per-class split: floor(train_fraction * class_count) rows into train,
/// remainder into test. Row order within each part follows the original
/// dataset order.
TrainTestSplit stratified_split(const Dataset& d, const SplitSpec& spec);

/// k folds with per-class counts within one of proportional; every row lands
/// in exactly one validation fold.
std::vector<Fold> stratified_kfold(const Dataset& d, int k, std::uint64_t seed);

/// Keeps every minority row and a uniform random majority subset of equal
/// size.
Dataset undersample(const Dataset& d, std::uint64_t seed);

/// Appends synthetic minority rows x + u*(nn - x) interpolated towards one of
/// the k nearest minority neighbours (Euclidean, ties to the lower row index)
/// until minority/majority reaches target_ratio.
Dataset smote(const Dataset& d, int k_neighbors, double target_ratio, std::uint64_t seed);

std::string to_string(ScalingMethod m);
ScalingMethod scaling_method_from_string(const std::string& s);

}  // namespace fraudpipe
