#pragma once

#include <optional>
#include <vector>

#include "rlintro/qfunction.hpp"
#include "rlintro/rng.hpp"

namespace rlintro {

enum class UpdateRule { QLearning, Sarsa };

struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    double decay_fraction = 0.1;  // fraction of total_steps spent decaying linearly
};

struct LearnerConfig {
    double alpha = 0.001;
    double gamma = 0.99;
    EpsilonSchedule epsilon;
    long total_steps = 35000;
    long learning_starts = 9750;  // DQN only; tabular agents learn from step 0
    UpdateRule update_rule = UpdateRule::QLearning;

    // DQN sizes, all overridable from the config file.
    std::size_t buffer_capacity = 10000;
    std::size_t batch_size = 32;
    long target_sync = 1000;
    std::vector<int> hidden_sizes = {64, 64};
};

void validate(const LearnerConfig& config);

// Linear decay from start to end over the first decay_fraction of total
// steps, constant afterwards; step is 0-based.
double epsilon_at(const LearnerConfig& config, long step);

// Epsilon-greedy: uniform action with probability epsilon, otherwise argmax
// with uniform tie-breaking. Draw order: one uniform01 for the branch, then
// one bounded draw.
Action select_action(const QFunction& qf, const AgentObservation& obs, double epsilon, Rng& rng);

struct Transition {
    AgentObservation obs;
    Action action = Action::Left;
    double reward = 0.0;
    AgentObservation next_obs;
    bool terminal = false;
};

// Q(s,a) += alpha * (r + gamma*B - Q(s,a)) with B = max_a' Q(s',a') for
// Q-learning, B = Q(s', next_action) for SARSA, B = 0 on terminal
// transitions. SARSA requires next_action on non-terminal transitions.
void td_update(QTable& table, const Transition& transition, const LearnerConfig& config,
               std::optional<Action> next_action = std::nullopt);

}  // namespace rlintro
