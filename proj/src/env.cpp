#include "rlintro/env.hpp"

#include <stdexcept>
#include <string>

namespace rlintro {

void validate(const EnvConfig& config) {
    if (config.side_length <= 0) {
        throw std::invalid_argument("env: side_length must be positive");
    }
    if (config.step_length <= 0) {
        throw std::invalid_argument("env: step_length must be positive");
    }
    if (!(config.found_threshold > config.step_length / 2.0)) {
        throw std::invalid_argument(
            "env: found_threshold must exceed step_length/2, got " +
            std::to_string(config.found_threshold));
    }
    if (config.time_limit && *config.time_limit <= 0) {
        throw std::invalid_argument("env: time_limit must be positive when set");
    }
    if (config.fixed_mailbox) {
        const auto& m = *config.fixed_mailbox;
        if (m.x < 0.0 || m.x > config.side_length || m.y < 0.0 || m.y > config.side_length) {
            throw std::invalid_argument("env: fixed_mailbox outside the square");
        }
    }
}

double euclidean_distance(const Vec2i& drone, const Vec2d& mailbox) {
    const double dx = drone.x - mailbox.x;
    const double dy = drone.y - mailbox.y;
    return std::sqrt(dx * dx + dy * dy);
}

int distance_bin(const Vec2i& drone, const Vec2d& mailbox) {
    return static_cast<int>(std::floor(euclidean_distance(drone, mailbox)));
}

AgentObservation observe(const WorldState& state) {
    return {state.drone_pos.x, state.drone_pos.y,
            distance_bin(state.drone_pos, state.mailbox_pos)};
}

bool is_terminal(const WorldState& state, const EnvConfig& config) {
    if (state.mode != TaskMode::Episodic) return false;
    if (euclidean_distance(state.drone_pos, state.mailbox_pos) < config.found_threshold) {
        return true;
    }
    return config.time_limit && state.step_count >= *config.time_limit;
}

namespace {

Vec2d sample_mailbox(const EnvConfig& config, const Vec2i& away_from, Rng& rng) {
    if (config.fixed_mailbox) return *config.fixed_mailbox;
    const double side = config.side_length;
    while (true) {
        Vec2d m{rng.uniform(0.0, side), rng.uniform(0.0, side)};
        if (euclidean_distance(away_from, m) >= config.found_threshold) return m;
    }
}

}  // namespace

std::pair<WorldState, AgentObservation> reset(const EnvConfig& config, TaskMode mode, Rng& rng) {
    validate(config);
    WorldState state;
    state.mode = mode;
    state.drone_pos = {config.side_length / 2, config.side_length / 2};
    state.mailbox_pos = sample_mailbox(config, state.drone_pos, rng);
    state.step_count = 0;
    state.mailboxes_found = 0;
    return {state, observe(state)};
}

std::pair<WorldState, StepOutcome> step(const WorldState& state, Action action,
                                        const EnvConfig& config, Rng& rng) {
    if (state.mode == TaskMode::Episodic && is_terminal(state, config)) {
        throw std::invalid_argument("env: step() called on a terminal episodic state");
    }

    WorldState next = state;
    StepOutcome out;
    out.info.distance_before = euclidean_distance(state.drone_pos, state.mailbox_pos);
    const int bin_before = distance_bin(state.drone_pos, state.mailbox_pos);

    const auto [dx, dy] = displacement(action);
    const Vec2i target{state.drone_pos.x + dx * config.step_length,
                       state.drone_pos.y + dy * config.step_length};
    if (target.x < 0 || target.x > config.side_length || target.y < 0 ||
        target.y > config.side_length) {
        out.info.boundary_violation = true;  // position unchanged
    } else {
        next.drone_pos = target;
    }
    next.step_count = state.step_count + 1;

    out.info.distance_after = euclidean_distance(next.drone_pos, state.mailbox_pos);
    const int bin_after = distance_bin(next.drone_pos, state.mailbox_pos);
    out.info.found = out.info.distance_after < config.found_threshold;

    double reward = 0.0;
    if (state.mode == TaskMode::Episodic) {
        reward += -0.1;
        if (out.info.boundary_violation) reward += -100.0;
        if (!out.info.boundary_violation) {
            if (bin_after < bin_before) reward += 1.0;
            if (bin_after > bin_before) reward += -1.0;
        }
        if (out.info.found) {
            reward += 100.0;
            out.terminal = true;
        } else if (config.time_limit && next.step_count >= *config.time_limit) {
            reward += -100.0;
            out.info.timeout = true;
            out.terminal = true;
        }
    } else {
        if (out.info.boundary_violation) reward += -100.0;
        if (!out.info.boundary_violation && bin_after < bin_before) reward += 1.0;
        if (out.info.found) {
            reward += 100.0;
            next.mailboxes_found += 1;
            next.mailbox_pos = sample_mailbox(config, next.drone_pos, rng);
        }
        out.terminal = false;
    }

    out.reward = reward;
    out.observation = observe(next);
    return {next, out};
}

GridWorld::GridWorld(const EnvConfig& config, TaskMode mode)
    : config_(config), mode_(mode), rng_(config.rng_seed) {
    validate(config_);
    state_ = rlintro::reset(config_, mode_, rng_).first;
}

AgentObservation GridWorld::reset() {
    auto [state, obs] = rlintro::reset(config_, mode_, rng_);
    state_ = state;
    return obs;
}

AgentObservation GridWorld::reset_at(Vec2i drone_pos) {
    if (drone_pos.x < 0 || drone_pos.x > config_.side_length || drone_pos.y < 0 ||
        drone_pos.y > config_.side_length) {
        throw std::invalid_argument("env: reset_at position outside the square");
    }
    auto [state, obs] = rlintro::reset(config_, mode_, rng_);
    state.drone_pos = drone_pos;
    state_ = state;
    return observe(state_);
}

StepOutcome GridWorld::step(Action action) {
    auto [next, out] = rlintro::step(state_, action, config_, rng_);
    state_ = next;
    return out;
}

}  // namespace rlintro
