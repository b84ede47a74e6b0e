#include "rlintro/learner.hpp"

#include <algorithm>
#include <stdexcept>

namespace rlintro {

void validate(const LearnerConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
        throw std::invalid_argument("learner: alpha must be in (0, 1]");
    }
    if (!(config.gamma > 0.0 && config.gamma < 1.0)) {
        throw std::invalid_argument("learner: gamma must be in (0, 1)");
    }
    auto in_unit = [](double e) { return e >= 0.0 && e <= 1.0; };
    if (!in_unit(config.epsilon.start) || !in_unit(config.epsilon.end)) {
        throw std::invalid_argument("learner: epsilon schedule must stay in [0, 1]");
    }
    if (config.epsilon.decay_fraction < 0.0 || config.epsilon.decay_fraction > 1.0) {
        throw std::invalid_argument("learner: epsilon decay_fraction must be in [0, 1]");
    }
    if (config.total_steps <= 0) {
        throw std::invalid_argument("learner: total_steps must be positive");
    }
    if (config.learning_starts < 0) {
        throw std::invalid_argument("learner: learning_starts must be non-negative");
    }
    if (config.batch_size == 0 || config.buffer_capacity == 0) {
        throw std::invalid_argument("learner: batch_size and buffer_capacity must be positive");
    }
    if (static_cast<std::size_t>(config.learning_starts) > config.buffer_capacity) {
        throw std::invalid_argument(
            "learner: learning_starts exceeds buffer_capacity; the buffer can never fill "
            "far enough to start");
    }
    if (config.target_sync <= 0) {
        throw std::invalid_argument("learner: target_sync must be positive");
    }
    if (config.hidden_sizes.empty() ||
        std::any_of(config.hidden_sizes.begin(), config.hidden_sizes.end(),
                    [](int n) { return n <= 0; })) {
        throw std::invalid_argument("learner: hidden_sizes must be positive");
    }
}

double epsilon_at(const LearnerConfig& config, long step) {
    const double decay_steps = config.epsilon.decay_fraction * config.total_steps;
    if (decay_steps <= 0.0 || step >= decay_steps) return config.epsilon.end;
    const double t = static_cast<double>(step) / decay_steps;
    return config.epsilon.start + t * (config.epsilon.end - config.epsilon.start);
}

Action select_action(const QFunction& qf, const AgentObservation& obs, double epsilon, Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("select_action: epsilon must be in [0, 1]");
    }
    if (rng.uniform01() < epsilon) {
        return static_cast<Action>(rng.uniform_index(kNumActions));
    }
    const QValues q = qf.q_values(obs);
    const double best = *std::max_element(q.begin(), q.end());
    std::array<int, kNumActions> ties{};
    int n_ties = 0;
    for (int i = 0; i < kNumActions; ++i) {
        if (q[i] == best) ties[n_ties++] = i;
    }
    return static_cast<Action>(ties[rng.uniform_index(n_ties)]);
}

void td_update(QTable& table, const Transition& transition, const LearnerConfig& config,
               std::optional<Action> next_action) {
    double bootstrap = 0.0;
    if (!transition.terminal) {
        const QValues next_q = table.q_values(transition.next_obs);
        if (config.update_rule == UpdateRule::QLearning) {
            bootstrap = *std::max_element(next_q.begin(), next_q.end());
        } else {
            if (!next_action) {
                throw std::invalid_argument(
                    "td_update: SARSA needs next_action on non-terminal transitions");
            }
            bootstrap = next_q[static_cast<std::size_t>(*next_action)];
        }
    }
    double& q = table.at(transition.obs, transition.action);
    q += config.alpha * (transition.reward + config.gamma * bootstrap - q);
}

}  // namespace rlintro
