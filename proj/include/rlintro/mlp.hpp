#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "rlintro/learner.hpp"
#include "rlintro/qfunction.hpp"
#include "rlintro/replay_buffer.hpp"

namespace rlintro {

struct MlpLayer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;     // out
};

// Feed-forward Q-network: input (x/side, y/side, dist_bin/max_bin), hidden
// layers with rectifier activations, 4 linear action-value outputs. Carries a
// target copy of the weights that changes only at sync events, plus the Adam
// moment estimates.
class MlpQNetwork : public QFunction {
  public:
    // He-initialized weights drawn from rng; biases zero.
    MlpQNetwork(const std::vector<int>& hidden_sizes, int side_length, Rng& rng);

    // All-zero weights (outputs are identically zero).
    static MlpQNetwork zeros(const std::vector<int>& hidden_sizes, int side_length);

    QValues q_values(const AgentObservation& obs) const override;
    std::string kind() const override { return "mlp"; }
    std::unique_ptr<QFunction> clone() const override {
        return std::make_unique<MlpQNetwork>(*this);
    }

    Eigen::Vector3d encode(const AgentObservation& obs) const;
    Eigen::VectorXd forward(const Eigen::Vector3d& input) const;
    Eigen::VectorXd target_forward(const Eigen::Vector3d& input) const;

    void sync_target() { target_layers_ = layers_; }

    std::vector<MlpLayer>& layers() { return layers_; }
    const std::vector<MlpLayer>& layers() const { return layers_; }
    const std::vector<MlpLayer>& target_layers() const { return target_layers_; }

    int side_length() const { return side_length_; }
    int max_dist_bin() const { return max_dist_bin_; }

    // Rebuilds target and Adam state after deserialization or manual edits.
    void reset_training_state();

    friend double dqn_train_step(MlpQNetwork& net, ReplayBuffer& buffer,
                                 const LearnerConfig& config, long step, Rng& rng);
    friend std::vector<MlpLayer> dqn_gradients(const MlpQNetwork& net,
                                               std::span<const Transition> batch, double gamma);

  private:
    explicit MlpQNetwork(int side_length);
    Eigen::VectorXd run(const std::vector<MlpLayer>& layers, const Eigen::Vector3d& input) const;
    void adam_step(const std::vector<MlpLayer>& gradients, double lr);

    int side_length_;
    int max_dist_bin_;
    std::vector<MlpLayer> layers_;
    std::vector<MlpLayer> target_layers_;
    std::vector<MlpLayer> adam_m_;
    std::vector<MlpLayer> adam_v_;
    long adam_t_ = 0;
};

// Mean squared TD error of the online network against targets
// r + gamma * max target-network output (0 on terminal transitions).
double dqn_loss(const MlpQNetwork& net, std::span<const Transition> batch, double gamma);

// Analytic gradient of dqn_loss with respect to the online weights, shaped
// like the layer list.
std::vector<MlpLayer> dqn_gradients(const MlpQNetwork& net, std::span<const Transition> batch,
                                    double gamma);

// One DQN update: sample a batch, one Adam step on the TD loss, target sync
// when step is a multiple of config.target_sync. Requires step and the
// buffer fill to have reached config.learning_starts. Returns the loss.
double dqn_train_step(MlpQNetwork& net, ReplayBuffer& buffer, const LearnerConfig& config,
                      long step, Rng& rng);

}  // namespace rlintro
