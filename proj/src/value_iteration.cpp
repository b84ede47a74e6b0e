#include "rlintro/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rlintro {

QTable value_iteration(const EnvConfig& config, double gamma, double tol, long max_sweeps) {
    validate(config);
    if (!config.fixed_mailbox) {
        throw std::invalid_argument("value_iteration: config must pin the mailbox");
    }
    if (config.time_limit) {
        throw std::invalid_argument(
            "value_iteration: time_limit must be unset; positions alone cannot represent "
            "a clocked state");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("value_iteration: gamma must be in (0, 1)");
    }

    const int n = config.side_length + 1;  // positions per axis
    const Vec2d mailbox = *config.fixed_mailbox;
    auto index = [n](int x, int y) { return y * n + x; };
    auto terminal = [&](const Vec2i& p) {
        return euclidean_distance(p, mailbox) < config.found_threshold;
    };

    Rng dummy_rng(0);  // the episodic transition never draws
    std::vector<std::array<double, kNumActions>> q(static_cast<std::size_t>(n) * n,
                                                   {0.0, 0.0, 0.0, 0.0});
    std::vector<std::array<double, kNumActions>> q_next = q;

    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const Vec2i pos{x, y};
                if (terminal(pos)) continue;
                WorldState state;
                state.mode = TaskMode::Episodic;
                state.drone_pos = pos;
                state.mailbox_pos = mailbox;
                const std::size_t here = static_cast<std::size_t>(index(x, y));
                for (int a = 0; a < kNumActions; ++a) {
                    const auto [next, out] =
                        step(state, static_cast<Action>(a), config, dummy_rng);
                    double bootstrap = 0.0;
                    if (!out.terminal) {
                        const auto& next_q =
                            q[static_cast<std::size_t>(index(next.drone_pos.x, next.drone_pos.y))];
                        bootstrap = *std::max_element(next_q.begin(), next_q.end());
                    }
                    const double value = out.reward + gamma * bootstrap;
                    const std::size_t action = static_cast<std::size_t>(a);
                    max_change = std::max(max_change, std::abs(value - q[here][action]));
                    q_next[here][action] = value;
                }
            }
        }
        q.swap(q_next);
        if (max_change < tol) break;
        if (sweep + 1 == max_sweeps) {
            throw std::runtime_error("value_iteration: did not reach the fixed point");
        }
    }

    QTable table(0.0);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const Vec2i pos{x, y};
            if (terminal(pos)) continue;
            const AgentObservation obs{x, y, distance_bin(pos, mailbox)};
            for (int a = 0; a < kNumActions; ++a) {
                table.at(obs, static_cast<Action>(a)) =
                    q[static_cast<std::size_t>(index(x, y))][static_cast<std::size_t>(a)];
            }
        }
    }
    return table;
}

}  // namespace rlintro
