#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraudpipe/matrix.hpp"

namespace fraudpipe {

enum class Activation { tanh, sigmoid, identity };

double apply_activation(Activation a, double x);

/// Derivative expressed through the activation output y = f(x):
/// tanh' = 1 - y^2, sigmoid' = y(1-y), identity' = 1.
double activation_grad(Activation a, double y);

struct LayerSpec {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    Activation activation = Activation::tanh;
};

struct Network {
    std::vector<LayerSpec> layers;
    std::vector<Matrix> weights;              // per layer, out_dim x in_dim
    std::vector<std::vector<double>> biases;  // per layer, out_dim

    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
    std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }

    void validate() const;

    bool operator==(const Network&) const = default;
};

inline bool operator==(const LayerSpec& a, const LayerSpec& b) {
    return a.in_dim == b.in_dim && a.out_dim == b.out_dim && a.activation == b.activation;
}

struct TrainConfig {
    double learning_rate = 0.01;
    int epochs = 60;
    int batch_size = 256;
    std::uint64_t seed = 0;
    bool shuffle = true;

    void validate() const;
};

/// Per-layer pre- and post-activation values from one forward pass.
/// post.back() is the network output.
struct ForwardCache {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;
};

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

struct TrainResult {
    Network network;
    std::vector<double> loss_history;  // full-data mean loss after each epoch
};

/// Xavier-uniform weights in [-sqrt(6/(in+out)), +sqrt(6/(in+out))],
/// zero biases.
Network init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed);

std::vector<double> forward(const Network& n, std::span<const double> x,
                            ForwardCache* cache = nullptr);

/// Mean squared error per component: ||y - y_hat||^2 / len(y).
double mse_loss(std::span<const double> y, std::span<const double> y_hat);

/// Analytic gradients of mse_loss(forward(n, x), target) with respect to
/// every weight and bias.
Gradients backprop(const Network& n, std::span<const double> x, std::span<const double> target);

/// Mini-batch SGD: w <- w - lr * grad averaged over the batch. The last
/// partial batch is used. Shuffling and therefore the whole run is
/// deterministic per cfg.seed.
TrainResult train_sgd(const Network& n, const Matrix& inputs, const Matrix& targets,
                      const TrainConfig& cfg);

/// Row-wise forward outputs.
Matrix predict(const Network& n, const Matrix& rows);

}  // namespace fraudpipe
