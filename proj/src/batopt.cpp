#include "fraudpipe/batopt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace fraudpipe {

void BatConfig::validate() const {
    if (n_bats < 1) throw std::invalid_argument("BatConfig: n_bats must be >= 1");
    if (!(f_min < f_max)) throw std::invalid_argument("BatConfig: requires f_min < f_max");
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw std::invalid_argument("BatConfig: alpha must be in (0,1)");
    }
    if (gamma <= 0.0) throw std::invalid_argument("BatConfig: gamma must be positive");
    if (r0 < 0.0 || r0 > 1.0) throw std::invalid_argument("BatConfig: r0 must be in [0,1]");
    if (a0 <= 0.0) throw std::invalid_argument("BatConfig: a0 must be positive");
    if (max_iter < 0) throw std::invalid_argument("BatConfig: max_iter must be >= 0");
}

double update_frequency(const BatConfig& cfg, double beta) {
    if (beta < 0.0 || beta > 1.0) {
        throw std::invalid_argument("update_frequency: beta must be in [0,1]");
    }
    return cfg.f_min + (cfg.f_max - cfg.f_min) * beta;
}

std::vector<double> update_velocity(const std::vector<double>& v,
                                    const std::vector<std::uint8_t>& x,
                                    const std::vector<std::uint8_t>& x_best, double frequency) {
    if (v.size() != x.size() || v.size() != x_best.size()) {
        throw std::invalid_argument("update_velocity: length mismatch");
    }
    constexpr double kClamp = 6.0;  // keeps the sigmoid transfer out of saturation
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double updated =
            v[i] + (static_cast<double>(x[i]) - static_cast<double>(x_best[i])) * frequency;
        out[i] = std::clamp(updated, -kClamp, kClamp);
    }
    return out;
}

std::vector<std::uint8_t> binarize_position(const std::vector<double>& v, Rng& rng) {
    std::vector<std::uint8_t> bits(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double p = 1.0 / (1.0 + std::exp(-v[i]));
        bits[i] = rng.uniform() < p ? 1 : 0;
    }
    return bits;
}

Bat update_loudness_pulse(Bat b, const BatConfig& cfg, int t) {
    if (t < 0) throw std::invalid_argument("update_loudness_pulse: t must be >= 0");
    b.loudness = cfg.alpha * b.loudness;
    b.pulse_rate = cfg.r0 * (1.0 - std::exp(-cfg.gamma * static_cast<double>(t)));
    return b;
}

namespace {

double checked_eval(const FitnessFn& fitness, const std::vector<std::uint8_t>& position,
                    int iteration, std::size_t bat_index) {
    try {
        return fitness(position);
    } catch (const std::exception& e) {
        throw std::runtime_error("run_bba: fitness evaluation failed at iteration " +
                                 std::to_string(iteration) + " for bat " +
                                 std::to_string(bat_index) + ": " + e.what());
    }
}

}  // namespace

BbaResult run_bba(const FitnessFn& fitness, std::size_t dim, const BatConfig& cfg) {
    cfg.validate();
    if (dim < 1) {
        throw std::invalid_argument("run_bba: dim must be >= 1");
    }
    if (!fitness) {
        throw std::invalid_argument("run_bba: fitness function not set");
    }

    Rng rng(cfg.seed);
    const auto n_bats = static_cast<std::size_t>(cfg.n_bats);
    std::vector<Bat> bats(n_bats);
    for (std::size_t i = 0; i < n_bats; ++i) {
        Bat& b = bats[i];
        b.position.resize(dim);
        if (i == 0) {
            // The all-ones candidate is always evaluated.
            std::fill(b.position.begin(), b.position.end(), std::uint8_t{1});
        } else {
            for (auto& bit : b.position) bit = rng.uniform() < 0.5 ? 1 : 0;
        }
        b.velocity.assign(dim, 0.0);
        b.loudness = cfg.a0;
        b.pulse_rate = cfg.r0;
    }

    BbaResult result;
    for (std::size_t i = 0; i < n_bats; ++i) {
        bats[i].fitness = checked_eval(fitness, bats[i].position, 0, i);
        ++result.evaluations;
        if (bats[i].fitness > result.best_fitness || i == 0) {
            result.best_fitness = bats[i].fitness;
            result.best_position = bats[i].position;
        }
    }
    result.history.push_back(result.best_fitness);

    const double p_flip = 1.0 / static_cast<double>(dim);
    std::vector<std::vector<std::uint8_t>> candidates(n_bats);
    std::vector<double> accept_draw(n_bats);

    for (int t = 1; t <= cfg.max_iter; ++t) {
        // Generation phase: all randomness is drawn serially in bat order so
        // evaluation scheduling cannot change the outcome.
        const std::vector<std::uint8_t> best_snapshot = result.best_position;
        for (std::size_t i = 0; i < n_bats; ++i) {
            Bat& b = bats[i];
            b.frequency = update_frequency(cfg, rng.uniform());
            b.velocity = update_velocity(b.velocity, b.position, best_snapshot, b.frequency);
            candidates[i] = binarize_position(b.velocity, rng);
            if (rng.uniform() > b.pulse_rate) {
                // Local solution around the current best: per-bit flips.
                candidates[i] = best_snapshot;
                for (auto& bit : candidates[i]) {
                    if (rng.uniform() < p_flip) bit ^= 1;
                }
            }
            accept_draw[i] = rng.uniform();
        }

        for (std::size_t i = 0; i < n_bats; ++i) {
            const double candidate_fitness = checked_eval(fitness, candidates[i], t, i);
            ++result.evaluations;
            // The paper's acceptance test is written for minimization; with a
            // maximized fitness the comparison is inverted.
            if (accept_draw[i] < bats[i].loudness && candidate_fitness > result.best_fitness) {
                bats[i].position = candidates[i];
                bats[i].fitness = candidate_fitness;
                bats[i] = update_loudness_pulse(std::move(bats[i]), cfg, t);
                result.best_fitness = candidate_fitness;
                result.best_position = bats[i].position;
            }
        }
        result.history.push_back(result.best_fitness);
    }
    return result;
}

FeatureSelectionResult select_features(const Dataset& train, const Dataset& val,
                                       const BatConfig& cfg, const AutoencoderSpec& ae_spec,
                                       const TrainConfig& train_cfg) {
    if (train.n_cols() != val.n_cols()) {
        throw std::invalid_argument("select_features: train/val column mismatch");
    }
    if (train.n_cols() == 0) {
        throw std::invalid_argument("select_features: no features");
    }

    TrainConfig wrapper_cfg = train_cfg;
    wrapper_cfg.epochs = std::min(wrapper_cfg.epochs, 10);

    std::map<std::vector<std::uint8_t>, double> memo;
    std::size_t trained_models = 0;

    const FitnessFn fitness = [&](const std::vector<std::uint8_t>& mask) -> double {
        const bool any = std::any_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b; });
        if (!any) {
            return -std::numeric_limits<double>::infinity();
        }
        if (const auto it = memo.find(mask); it != memo.end()) {
            return it->second;
        }
        const Dataset masked_train = train.select_columns(mask);
        const Dataset masked_val = val.select_columns(mask);

        AutoencoderSpec spec = ae_spec;
        spec.input_dim = masked_train.n_cols();
        Network net = build_autoencoder(spec, derive_seed(wrapper_cfg.seed, "wrapper-init"));
        const TrainResult trained =
            train_sgd(net, masked_train.features, masked_train.features, wrapper_cfg);
        ++trained_models;

        const std::vector<double> errors =
            reconstruction_errors(trained.network, masked_val.features);
        const double score = auc(roc_curve(val.labels, errors));
        memo.emplace(mask, score);
        return score;
    };

    BbaResult bba = run_bba(fitness, train.n_cols(), cfg);

    FeatureSelectionResult result;
    result.mask = std::move(bba.best_position);
    result.val_auc = bba.best_fitness;
    result.history = std::move(bba.history);
    result.evaluations = bba.evaluations;
    result.trained_models = trained_models;
    return result;
}

}  // namespace fraudpipe
