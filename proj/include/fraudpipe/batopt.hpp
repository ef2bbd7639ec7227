#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "fraudpipe/autoenc.hpp"
#include "fraudpipe/dataio.hpp"
#include "fraudpipe/rng.hpp"

namespace fraudpipe {

struct Bat {
    std::vector<std::uint8_t> position;
    std::vector<double> velocity;
    double frequency = 0.0;
    double loudness = 1.0;
    double pulse_rate = 0.5;
    double fitness = -std::numeric_limits<double>::infinity();
};

struct BatConfig {
    int n_bats = 30;
    double f_min = 0.0;
    double f_max = 2.0;
    double alpha = 0.9;   // loudness decay
    double gamma = 0.9;   // pulse-rate growth
    double r0 = 0.5;      // pulse-rate ceiling and initial value
    double a0 = 1.0;      // initial loudness
    int max_iter = 50;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Scores a candidate bit vector, higher is better. Must be deterministic
/// within a run and must give the all-zero vector its worst score (or throw).
using FitnessFn = std::function<double(const std::vector<std::uint8_t>&)>;

struct BbaResult {
    std::vector<std::uint8_t> best_position;
    double best_fitness = -std::numeric_limits<double>::infinity();
    /// Best fitness of the initial swarm followed by one entry per iteration;
    /// non-decreasing.
    std::vector<double> history;
    std::size_t evaluations = 0;
};

struct FeatureSelectionResult {
    std::vector<std::uint8_t> mask;
    double val_auc = 0.0;
    std::vector<double> history;
    std::size_t evaluations = 0;     // fitness calls issued by the optimizer
    std::size_t trained_models = 0;  // distinct masks actually trained
};

/// f_min + (f_max - f_min) * beta.
double update_frequency(const BatConfig& cfg, double beta);

/// v + (x - x_best) * f elementwise, clamped to [-6, 6].
std::vector<double> update_velocity(const std::vector<double>& v,
                                    const std::vector<std::uint8_t>& x,
                                    const std::vector<std::uint8_t>& x_best, double frequency);

/// Stochastic rounding through the sigmoid transfer: bit i is 1 with
/// probability 1/(1+exp(-v_i)).
std::vector<std::uint8_t> binarize_position(const std::vector<double>& v, Rng& rng);

/// Loudness decay A <- alpha*A and pulse-rate growth r <- r0*(1 - exp(-gamma*t)).
Bat update_loudness_pulse(Bat b, const BatConfig& cfg, int t);

/// Binary bat search over {0,1}^dim. Bat 0 starts at all-ones so the
/// no-selection baseline is always evaluated; candidate acceptance requires
/// rand < A_i and a strict improvement on the global best.
BbaResult run_bba(const FitnessFn& fitness, std::size_t dim, const BatConfig& cfg);

/// Wrapper feature selection: the fitness of a mask is the validation AUC of
/// an autoencoder trained on the masked columns with a budget-reduced epoch
/// count (at most 10); the all-zero mask scores -inf. Fitness values are
/// memoized per mask. Both datasets must already be standardized consistently.
FeatureSelectionResult select_features(const Dataset& train, const Dataset& val,
                                       const BatConfig& cfg, const AutoencoderSpec& ae_spec,
                                       const TrainConfig& train_cfg);

}  // namespace fraudpipe
