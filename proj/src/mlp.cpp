#include "rlintro/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace rlintro {

namespace {
constexpr int kInputDim = 3;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

std::vector<MlpLayer> zeros_like(const std::vector<MlpLayer>& layers) {
    std::vector<MlpLayer> out;
    out.reserve(layers.size());
    for (const auto& l : layers) {
        out.push_back({Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()),
                       Eigen::VectorXd::Zero(l.bias.size())});
    }
    return out;
}
}  // namespace

MlpQNetwork::MlpQNetwork(int side_length)
    : side_length_(side_length),
      max_dist_bin_(static_cast<int>(std::ceil(side_length * std::sqrt(2.0)))) {}

MlpQNetwork::MlpQNetwork(const std::vector<int>& hidden_sizes, int side_length, Rng& rng)
    : MlpQNetwork(side_length) {
    int fan_in = kInputDim;
    for (std::size_t i = 0; i <= hidden_sizes.size(); ++i) {
        const int fan_out =
            i < hidden_sizes.size() ? hidden_sizes[i] : kNumActions;
        MlpLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
        const double scale = std::sqrt(2.0 / fan_in);
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                layer.weights(r, c) = scale * rng.normal();
            }
        }
        layers_.push_back(std::move(layer));
        fan_in = fan_out;
    }
    reset_training_state();
}

MlpQNetwork MlpQNetwork::zeros(const std::vector<int>& hidden_sizes, int side_length) {
    MlpQNetwork net(side_length);
    int fan_in = kInputDim;
    for (std::size_t i = 0; i <= hidden_sizes.size(); ++i) {
        const int fan_out = i < hidden_sizes.size() ? hidden_sizes[i] : kNumActions;
        net.layers_.push_back(
            {Eigen::MatrixXd::Zero(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)});
        fan_in = fan_out;
    }
    net.reset_training_state();
    return net;
}

void MlpQNetwork::reset_training_state() {
    target_layers_ = layers_;
    adam_m_ = zeros_like(layers_);
    adam_v_ = zeros_like(layers_);
    adam_t_ = 0;
}

Eigen::Vector3d MlpQNetwork::encode(const AgentObservation& obs) const {
    return {static_cast<double>(obs.x) / side_length_,
            static_cast<double>(obs.y) / side_length_,
            static_cast<double>(obs.dist_bin) / max_dist_bin_};
}

Eigen::VectorXd MlpQNetwork::run(const std::vector<MlpLayer>& layers,
                                 const Eigen::Vector3d& input) const {
    Eigen::VectorXd h = input;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        h = layers[i].weights * h + layers[i].bias;
        if (i + 1 < layers.size()) h = h.cwiseMax(0.0);
    }
    return h;
}

Eigen::VectorXd MlpQNetwork::forward(const Eigen::Vector3d& input) const {
    return run(layers_, input);
}

Eigen::VectorXd MlpQNetwork::target_forward(const Eigen::Vector3d& input) const {
    return run(target_layers_, input);
}

QValues MlpQNetwork::q_values(const AgentObservation& obs) const {
    const Eigen::VectorXd out = forward(encode(obs));
    return {out(0), out(1), out(2), out(3)};
}

namespace {

// TD targets are fixed numbers as far as the online weights are concerned:
// they come from the target network.
Eigen::VectorXd td_targets(const MlpQNetwork& net, std::span<const Transition> batch,
                           double gamma) {
    Eigen::VectorXd y(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double bootstrap = 0.0;
        if (!batch[i].terminal) {
            bootstrap = net.target_forward(net.encode(batch[i].next_obs)).maxCoeff();
        }
        y(static_cast<Eigen::Index>(i)) = batch[i].reward + gamma * bootstrap;
    }
    return y;
}

}  // namespace

double dqn_loss(const MlpQNetwork& net, std::span<const Transition> batch, double gamma) {
    if (batch.empty()) throw std::invalid_argument("dqn_loss: empty batch");
    const Eigen::VectorXd y = td_targets(net, batch, gamma);
    double sum = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Eigen::VectorXd q = net.forward(net.encode(batch[i].obs));
        const double err = q(static_cast<int>(batch[i].action)) - y(static_cast<Eigen::Index>(i));
        sum += err * err;
    }
    return sum / static_cast<double>(batch.size());
}

std::vector<MlpLayer> dqn_gradients(const MlpQNetwork& net, std::span<const Transition> batch,
                                    double gamma) {
    if (batch.empty()) throw std::invalid_argument("dqn_gradients: empty batch");
    const auto& layers = net.layers_;
    const std::size_t n_layers = layers.size();
    const Eigen::Index batch_size = static_cast<Eigen::Index>(batch.size());

    // Batched forward pass with cached pre-activations.
    Eigen::MatrixXd input(kInputDim, batch_size);
    for (Eigen::Index i = 0; i < batch_size; ++i) {
        input.col(i) = net.encode(batch[static_cast<std::size_t>(i)].obs);
    }
    std::vector<Eigen::MatrixXd> activations;  // post-activation per layer input
    std::vector<Eigen::MatrixXd> pre;          // pre-activation per layer output
    activations.push_back(input);
    for (std::size_t l = 0; l < n_layers; ++l) {
        Eigen::MatrixXd z = (layers[l].weights * activations.back()).colwise() + layers[l].bias;
        pre.push_back(z);
        if (l + 1 < n_layers) {
            activations.push_back(z.cwiseMax(0.0));
        }
    }

    const Eigen::VectorXd y = td_targets(net, batch, gamma);

    // d(mean squared error)/d(output): only the taken action's row is hit.
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(kNumActions, batch_size);
    for (Eigen::Index i = 0; i < batch_size; ++i) {
        const int a = static_cast<int>(batch[static_cast<std::size_t>(i)].action);
        delta(a, i) = 2.0 * (pre.back()(a, i) - y(i)) / static_cast<double>(batch_size);
    }

    std::vector<MlpLayer> grads = zeros_like(layers);
    for (std::size_t l = n_layers; l-- > 0;) {
        grads[l].weights = delta * activations[l].transpose();
        grads[l].bias = delta.rowwise().sum();
        if (l > 0) {
            delta = (layers[l].weights.transpose() * delta).array() *
                    (pre[l - 1].array() > 0.0).cast<double>();
        }
    }
    return grads;
}

void MlpQNetwork::adam_step(const std::vector<MlpLayer>& gradients, double lr) {
    adam_t_ += 1;
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(adam_t_));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(adam_t_));
    auto update = [&](auto& w, auto& m, auto& v, const auto& g) {
        m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * g;
        v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * g.cwiseProduct(g);
        w -= (lr * (m / bc1).array() / ((v / bc2).array().sqrt() + kAdamEps)).matrix();
    };
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        update(layers_[l].weights, adam_m_[l].weights, adam_v_[l].weights, gradients[l].weights);
        update(layers_[l].bias, adam_m_[l].bias, adam_v_[l].bias, gradients[l].bias);
    }
}

double dqn_train_step(MlpQNetwork& net, ReplayBuffer& buffer, const LearnerConfig& config,
                      long step, Rng& rng) {
    if (step < config.learning_starts ||
        buffer.size() < static_cast<std::size_t>(config.learning_starts)) {
        throw std::invalid_argument("dqn_train_step: called before learning_starts");
    }
    const std::vector<Transition> batch = buffer.sample_batch(config.batch_size, rng);
    const double loss = dqn_loss(net, batch, config.gamma);
    const std::vector<MlpLayer> grads = dqn_gradients(net, batch, config.gamma);
    net.adam_step(grads, config.alpha);
    if (step % config.target_sync == 0) net.sync_target();
    return loss;
}

}  // namespace rlintro
