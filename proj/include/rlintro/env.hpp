#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "rlintro/action.hpp"
#include "rlintro/rng.hpp"

namespace rlintro {

enum class TaskMode : std::uint8_t { Episodic, NonEpisodic };

struct Vec2i {
    int x = 0;
    int y = 0;
    friend bool operator==(const Vec2i&, const Vec2i&) = default;
};

struct Vec2d {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Vec2d&, const Vec2d&) = default;
};

struct EnvConfig {
    int side_length = 40;          // square is [0, side_length]^2, meters
    int step_length = 1;           // meters per move
    double found_threshold = 2.0;  // mailbox found when distance drops below this
    std::optional<int> time_limit = 150;  // episodic only; nullopt disables the timeout
    std::uint64_t rng_seed = 0;

    // Pins the mailbox instead of sampling it; used by the value-iteration
    // oracle and reduced-MDP tests. Not part of the JSON config surface.
    std::optional<Vec2d> fixed_mailbox;
};

// Throws std::invalid_argument when a field is out of contract.
void validate(const EnvConfig& config);

struct WorldState {
    Vec2i drone_pos;
    Vec2d mailbox_pos;
    int step_count = 0;
    TaskMode mode = TaskMode::Episodic;
    int mailboxes_found = 0;  // non-episodic tally
};

// What the agent sees: position plus distance magnitude, direction hidden.
struct AgentObservation {
    int x = 0;
    int y = 0;
    int dist_bin = 0;  // floor of Euclidean distance to the mailbox, meters

    friend bool operator==(const AgentObservation&, const AgentObservation&) = default;
    friend auto operator<=>(const AgentObservation&, const AgentObservation&) = default;
};

struct ObservationHash {
    std::size_t operator()(const AgentObservation& o) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(o.x);
        h = h * 1000003u + static_cast<std::uint64_t>(o.y);
        h = h * 1000003u + static_cast<std::uint64_t>(o.dist_bin);
        return static_cast<std::size_t>(h);
    }
};

struct StepInfo {
    double distance_before = 0.0;
    double distance_after = 0.0;
    bool boundary_violation = false;
    bool found = false;
    bool timeout = false;
};

struct StepOutcome {
    AgentObservation observation;
    double reward = 0.0;
    bool terminal = false;
    StepInfo info;
};

double euclidean_distance(const Vec2i& drone, const Vec2d& mailbox);
int distance_bin(const Vec2i& drone, const Vec2d& mailbox);

AgentObservation observe(const WorldState& state);

// True when the episodic state can no longer be stepped (found or timed out).
bool is_terminal(const WorldState& state, const EnvConfig& config);

// Mailbox uniform on the square, resampled until it is at least
// found_threshold away from the drone; drone starts at the center.
std::pair<WorldState, AgentObservation> reset(const EnvConfig& config, TaskMode mode, Rng& rng);

// One transition. The reward is the sum of every case that applies:
//   episodic:      -0.1 step cost; -100 boundary attempt; +1/-1 when the
//                  discretized distance decreased/increased (moves only);
//                  +100 found (terminal); -100 timeout (terminal).
//   non-episodic:  -100 boundary attempt; +1 distance decrease; +100 found,
//                  then the mailbox respawns and the run continues.
// Found is checked before timeout; boundary attempts leave the position
// unchanged and carry no distance term. The rng is used only for the
// non-episodic respawn.
std::pair<WorldState, StepOutcome> step(const WorldState& state, Action action,
                                        const EnvConfig& config, Rng& rng);

// Stateful convenience wrapper around the transition functions; owns the
// world state and the RNG stream. One instance per training run.
class GridWorld {
  public:
    GridWorld(const EnvConfig& config, TaskMode mode);

    AgentObservation reset();
    // Reset keeping the episode bookkeeping semantics but forcing the drone
    // position; exploration hook for the convergence tests.
    AgentObservation reset_at(Vec2i drone_pos);

    StepOutcome step(Action action);

    const WorldState& state() const { return state_; }
    const EnvConfig& config() const { return config_; }
    TaskMode mode() const { return mode_; }
    bool done() const { return is_terminal(state_, config_); }

  private:
    EnvConfig config_;
    TaskMode mode_;
    Rng rng_;
    WorldState state_;
};

}  // namespace rlintro
