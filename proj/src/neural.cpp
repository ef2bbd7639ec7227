#include "fraudpipe/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fraudpipe/rng.hpp"

namespace fraudpipe {

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::tanh:
            // (e^2x - 1) / (e^2x + 1), saturated beyond |x| > 20.
            if (x > 20.0) return 1.0;
            if (x < -20.0) return -1.0;
            {
                const double e2x = std::exp(2.0 * x);
                return (e2x - 1.0) / (e2x + 1.0);
            }
        case Activation::sigmoid:
            if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
            {
                const double ex = std::exp(x);
                return ex / (1.0 + ex);
            }
        case Activation::identity:
            return x;
    }
    return x;
}

double activation_grad(Activation a, double y) {
    switch (a) {
        case Activation::tanh:
            return 1.0 - y * y;
        case Activation::sigmoid:
            return y * (1.0 - y);
        case Activation::identity:
            return 1.0;
    }
    return 1.0;
}

void Network::validate() const {
    if (layers.size() != weights.size() || layers.size() != biases.size()) {
        throw std::invalid_argument("Network: layer/weight/bias count mismatch");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].in_dim == 0 || layers[i].out_dim == 0) {
            throw std::invalid_argument("Network: zero layer dimension");
        }
        if (weights[i].rows() != layers[i].out_dim || weights[i].cols() != layers[i].in_dim) {
            throw std::invalid_argument("Network: weight shape does not match layer spec");
        }
        if (biases[i].size() != layers[i].out_dim) {
            throw std::invalid_argument("Network: bias length does not match layer spec");
        }
        if (i + 1 < layers.size() && layers[i].out_dim != layers[i + 1].in_dim) {
            throw std::invalid_argument("Network: adjacent layers are not dimension-compatible");
        }
    }
}

void TrainConfig::validate() const {
    if (learning_rate < 0.0) throw std::invalid_argument("TrainConfig: negative learning rate");
    if (epochs < 0) throw std::invalid_argument("TrainConfig: negative epochs");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
}

Network init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
    if (specs.empty()) {
        throw std::invalid_argument("init_network: no layers");
    }
    for (std::size_t i = 0; i + 1 < specs.size(); ++i) {
        if (specs[i].out_dim != specs[i + 1].in_dim) {
            throw std::invalid_argument("init_network: dimension chain mismatch at layer " +
                                        std::to_string(i));
        }
    }
    Network n;
    n.layers = specs;
    Rng rng(seed);
    for (const auto& spec : specs) {
        if (spec.in_dim == 0 || spec.out_dim == 0) {
            throw std::invalid_argument("init_network: zero layer dimension");
        }
        const double bound =
            std::sqrt(6.0 / static_cast<double>(spec.in_dim + spec.out_dim));
        Matrix w(spec.out_dim, spec.in_dim);
        for (std::size_t r = 0; r < w.rows(); ++r) {
            for (std::size_t c = 0; c < w.cols(); ++c) {
                w(r, c) = rng.uniform(-bound, bound);
            }
        }
        n.weights.push_back(std::move(w));
        n.biases.emplace_back(spec.out_dim, 0.0);
    }
    return n;
}

std::vector<double> forward(const Network& n, std::span<const double> x, ForwardCache* cache) {
    if (x.size() != n.input_dim()) {
        throw std::invalid_argument("forward: input length does not match first layer");
    }
    if (cache) {
        cache->pre.assign(n.layers.size(), {});
        cache->post.assign(n.layers.size(), {});
    }
    std::vector<double> current(x.begin(), x.end());
    for (std::size_t l = 0; l < n.layers.size(); ++l) {
        const auto& spec = n.layers[l];
        const Matrix& w = n.weights[l];
        std::vector<double> pre(spec.out_dim);
        for (std::size_t r = 0; r < spec.out_dim; ++r) {
            double acc = n.biases[l][r];
            const auto wr = w.row(r);
            for (std::size_t c = 0; c < spec.in_dim; ++c) {
                acc += wr[c] * current[c];
            }
            pre[r] = acc;
        }
        std::vector<double> post(spec.out_dim);
        for (std::size_t r = 0; r < spec.out_dim; ++r) {
            post[r] = apply_activation(spec.activation, pre[r]);
        }
        if (cache) {
            cache->pre[l] = pre;
            cache->post[l] = post;
        }
        current = std::move(post);
    }
    return current;
}

double mse_loss(std::span<const double> y, std::span<const double> y_hat) {
    if (y.empty()) {
        throw std::invalid_argument("mse_loss: empty vectors");
    }
    if (y.size() != y_hat.size()) {
        throw std::invalid_argument("mse_loss: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double diff = y[i] - y_hat[i];
        acc += diff * diff;
    }
    return acc / static_cast<double>(y.size());
}

namespace {

Gradients zero_gradients(const Network& n) {
    Gradients g;
    for (const auto& spec : n.layers) {
        g.weights.emplace_back(spec.out_dim, spec.in_dim);
        g.biases.emplace_back(spec.out_dim, 0.0);
    }
    return g;
}

// Accumulates dLoss/dparams for one sample into g.
void backprop_into(const Network& n, std::span<const double> x, std::span<const double> target,
                   Gradients& g) {
    ForwardCache cache;
    const std::vector<double> output = forward(n, x, &cache);
    if (target.size() != output.size()) {
        throw std::invalid_argument("backprop: target length does not match output");
    }

    // dL/dy for L = ||y - t||^2 / len.
    std::vector<double> delta(output.size());
    const double scale = 2.0 / static_cast<double>(output.size());
    for (std::size_t i = 0; i < output.size(); ++i) {
        delta[i] = scale * (output[i] - target[i]);
    }

    for (std::size_t l = n.layers.size(); l-- > 0;) {
        const auto& spec = n.layers[l];
        const auto& post = cache.post[l];
        // delta through the activation.
        for (std::size_t r = 0; r < spec.out_dim; ++r) {
            delta[r] *= activation_grad(spec.activation, post[r]);
        }
        const std::span<const double> input =
            l == 0 ? x : std::span<const double>(cache.post[l - 1]);
        Matrix& gw = g.weights[l];
        for (std::size_t r = 0; r < spec.out_dim; ++r) {
            const double dr = delta[r];
            auto grow = gw.row(r);
            for (std::size_t c = 0; c < spec.in_dim; ++c) {
                grow[c] += dr * input[c];
            }
            g.biases[l][r] += dr;
        }
        if (l == 0) break;
        std::vector<double> prev(spec.in_dim, 0.0);
        const Matrix& w = n.weights[l];
        for (std::size_t r = 0; r < spec.out_dim; ++r) {
            const double dr = delta[r];
            const auto wr = w.row(r);
            for (std::size_t c = 0; c < spec.in_dim; ++c) {
                prev[c] += dr * wr[c];
            }
        }
        delta = std::move(prev);
    }
}

}  // namespace

Gradients backprop(const Network& n, std::span<const double> x, std::span<const double> target) {
    Gradients g = zero_gradients(n);
    backprop_into(n, x, target, g);
    return g;
}

TrainResult train_sgd(const Network& n, const Matrix& inputs, const Matrix& targets,
                      const TrainConfig& cfg) {
    cfg.validate();
    if (inputs.rows() == 0) {
        throw std::invalid_argument("train_sgd: empty data");
    }
    if (inputs.rows() != targets.rows()) {
        throw std::invalid_argument("train_sgd: input/target row mismatch");
    }
    if (inputs.cols() != n.input_dim() || targets.cols() != n.output_dim()) {
        throw std::invalid_argument("train_sgd: data shape does not match network");
    }

    TrainResult result;
    result.network = n;
    Network& net = result.network;

    const std::size_t n_rows = inputs.rows();
    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(cfg.seed);
    Gradients batch_grad = zero_gradients(net);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (cfg.shuffle) {
            rng.shuffle(order);
        }
        for (std::size_t start = 0; start < n_rows;
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(n_rows, start + static_cast<std::size_t>(cfg.batch_size));
            for (auto& w : batch_grad.weights) {
                std::fill(w.data(), w.data() + w.rows() * w.cols(), 0.0);
            }
            for (auto& b : batch_grad.biases) {
                std::fill(b.begin(), b.end(), 0.0);
            }
            for (std::size_t i = start; i < stop; ++i) {
                backprop_into(net, inputs.row(order[i]), targets.row(order[i]), batch_grad);
            }
            const double step =
                cfg.learning_rate / static_cast<double>(stop - start);
            for (std::size_t l = 0; l < net.layers.size(); ++l) {
                double* w = net.weights[l].data();
                const double* gw = batch_grad.weights[l].data();
                const std::size_t count = net.weights[l].rows() * net.weights[l].cols();
                for (std::size_t i = 0; i < count; ++i) {
                    w[i] -= step * gw[i];
                }
                for (std::size_t r = 0; r < net.biases[l].size(); ++r) {
                    net.biases[l][r] -= step * batch_grad.biases[l][r];
                }
            }
        }
        double epoch_loss = 0.0;
        for (std::size_t i = 0; i < n_rows; ++i) {
            const auto out = forward(net, inputs.row(i));
            epoch_loss += mse_loss(targets.row(i), out);
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(n_rows));
    }
    return result;
}

Matrix predict(const Network& n, const Matrix& rows) {
    if (rows.cols() != n.input_dim() && rows.rows() > 0) {
        throw std::invalid_argument("predict: column count does not match network input");
    }
    Matrix out(rows.rows(), n.output_dim());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        const auto y = forward(n, rows.row(r));
        std::copy(y.begin(), y.end(), out.row(r).begin());
    }
    return out;
}

}  // namespace fraudpipe
