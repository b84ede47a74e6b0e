#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rlintro/env.hpp"

using namespace rlintro;

namespace {

WorldState make_state(Vec2i drone, Vec2d mailbox, TaskMode mode, int step_count = 0) {
    WorldState s;
    s.drone_pos = drone;
    s.mailbox_pos = mailbox;
    s.mode = mode;
    s.step_count = step_count;
    return s;
}

// Reward reconstructed from the outcome flags and the case table alone;
// independent of the value the environment actually summed.
double reconstruct_reward(const StepOutcome& out, TaskMode mode) {
    const int bin_before = static_cast<int>(std::floor(out.info.distance_before));
    const int bin_after = static_cast<int>(std::floor(out.info.distance_after));
    double r = 0.0;
    if (mode == TaskMode::Episodic) {
        r += -0.1;
        if (out.info.boundary_violation) r += -100.0;
        if (!out.info.boundary_violation && bin_after < bin_before) r += 1.0;
        if (!out.info.boundary_violation && bin_after > bin_before) r += -1.0;
        if (out.info.found) r += 100.0;
        if (out.info.timeout) r += -100.0;
    } else {
        if (out.info.boundary_violation) r += -100.0;
        if (!out.info.boundary_violation && bin_after < bin_before) r += 1.0;
        if (out.info.found) r += 100.0;
    }
    return r;
}

}  // namespace

TEST_CASE("reset places the drone at the center with step_count 0") {
    EnvConfig config;
    config.rng_seed = 7;
    Rng rng(config.rng_seed);
    const auto [state, obs] = reset(config, TaskMode::Episodic, rng);
    CHECK(state.drone_pos == Vec2i{20, 20});
    CHECK(state.step_count == 0);
    CHECK(obs.x == 20);
    CHECK(obs.y == 20);
    CHECK(obs.dist_bin == distance_bin(state.drone_pos, state.mailbox_pos));
}

TEST_CASE("equal seeds give identical mailboxes") {
    EnvConfig config;
    Rng rng_a(42), rng_b(42);
    const auto [state_a, obs_a] = reset(config, TaskMode::Episodic, rng_a);
    const auto [state_b, obs_b] = reset(config, TaskMode::Episodic, rng_b);
    CHECK(state_a.mailbox_pos == state_b.mailbox_pos);
}

TEST_CASE("mailbox is resampled until it clears the found threshold") {
    EnvConfig config;
    // A huge threshold forces many rejections, exercising the resample loop.
    config.found_threshold = 25.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const auto [state, obs] = reset(config, TaskMode::Episodic, rng);
        CHECK(euclidean_distance(state.drone_pos, state.mailbox_pos) >= 25.0);
    }
}

TEST_CASE("observe discretizes the Euclidean distance") {
    CHECK(observe(make_state({3, 4}, {0.0, 0.0}, TaskMode::Episodic)).dist_bin == 5);
    CHECK(observe(make_state({10, 10}, {10.0, 10.9}, TaskMode::Episodic)).dist_bin == 0);
    CHECK(observe(make_state({0, 0}, {40.0, 40.0}, TaskMode::Episodic)).dist_bin == 56);
}

TEST_CASE("episodic step toward the mailbox pays the step cost plus the approach bonus") {
    EnvConfig config;
    Rng rng(0);
    const auto state = make_state({10, 10}, {10.0, 15.0}, TaskMode::Episodic);
    const auto [next, out] = step(state, Action::Forward, config, rng);
    CHECK(next.drone_pos == Vec2i{10, 11});
    CHECK(out.reward == doctest::Approx(0.9).epsilon(1e-12));
    CHECK_FALSE(out.terminal);
    CHECK_FALSE(out.info.boundary_violation);
}

TEST_CASE("boundary attempt leaves the position unchanged and adds no distance term") {
    EnvConfig config;
    Rng rng(0);
    const auto state = make_state({0, 20}, {30.0, 20.0}, TaskMode::Episodic);
    const auto [next, out] = step(state, Action::Left, config, rng);
    CHECK(next.drone_pos == Vec2i{0, 20});
    CHECK(out.info.boundary_violation);
    CHECK(out.reward == doctest::Approx(-100.1).epsilon(1e-12));
    CHECK_FALSE(out.terminal);
}

TEST_CASE("crossing the found threshold ends the episode with the full sum") {
    EnvConfig config;
    Rng rng(0);
    const auto state = make_state({10, 11}, {10.0, 13.2}, TaskMode::Episodic);
    const auto [next, out] = step(state, Action::Forward, config, rng);
    CHECK(out.info.distance_before == doctest::Approx(2.2));
    CHECK(out.info.distance_after == doctest::Approx(1.2));
    CHECK(out.info.found);
    CHECK(out.terminal);
    CHECK(out.reward == doctest::Approx(100.9).epsilon(1e-12));
}

TEST_CASE("landing exactly on the threshold is not a find") {
    EnvConfig config;
    Rng rng(0);
    const auto state = make_state({10, 10}, {10.0, 13.0}, TaskMode::Episodic);
    const auto [next, out] = step(state, Action::Forward, config, rng);
    CHECK(out.info.distance_after == 2.0);
    CHECK_FALSE(out.info.found);
    CHECK_FALSE(out.terminal);
    CHECK(out.reward == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("non-episodic find rewards 101, continues, and respawns the mailbox") {
    EnvConfig config;
    Rng rng(3);
    const auto state = make_state({10, 11}, {10.0, 13.2}, TaskMode::NonEpisodic);
    const auto [next, out] = step(state, Action::Forward, config, rng);
    CHECK(out.reward == doctest::Approx(101.0).epsilon(1e-12));
    CHECK_FALSE(out.terminal);
    CHECK(out.info.found);
    CHECK(next.mailboxes_found == 1);
    CHECK(next.mailbox_pos != Vec2d{10.0, 13.2});
    CHECK(euclidean_distance(next.drone_pos, next.mailbox_pos) >= config.found_threshold);
}

TEST_CASE("timeout on the 150th step without a find") {
    EnvConfig config;
    GridWorld env(config, TaskMode::Episodic);
    // Pin the drone against the left wall; every step is a boundary attempt.
    env.reset_at({0, 20});
    // Keep the mailbox away from the wall so the episode cannot end early.
    while (euclidean_distance({0, 20}, env.state().mailbox_pos) < 30.0) {
        env.reset_at({0, 20});
    }
    StepOutcome out;
    for (int i = 0; i < 150; ++i) {
        REQUIRE_FALSE(env.done());
        out = env.step(Action::Left);
    }
    CHECK(out.terminal);
    CHECK(out.info.timeout);
    CHECK_FALSE(out.info.found);
    CHECK(out.reward == doctest::Approx(-200.1).epsilon(1e-12));
    CHECK(env.state().step_count == 150);
    CHECK_THROWS_AS(env.step(Action::Left), std::invalid_argument);
}

TEST_CASE("found wins over timeout on the final step") {
    EnvConfig config;
    Rng rng(0);
    auto state = make_state({10, 11}, {10.0, 13.2}, TaskMode::Episodic, 149);
    const auto [next, out] = step(state, Action::Forward, config, rng);
    CHECK(out.info.found);
    CHECK_FALSE(out.info.timeout);
    CHECK(out.terminal);
    CHECK(out.reward == doctest::Approx(100.9).epsilon(1e-12));
}

TEST_CASE("random walks stay inside the square and rewards decompose") {
    for (TaskMode mode : {TaskMode::Episodic, TaskMode::NonEpisodic}) {
        EnvConfig config;
        config.rng_seed = 11;
        GridWorld env(config, mode);
        Rng action_rng(99);
        long found_rewards = 0;
        for (int i = 0; i < 5000; ++i) {
            if (env.done()) env.reset();
            const auto before = env.state();
            const auto out = env.step(static_cast<Action>(action_rng.uniform_index(4)));
            const auto& after = env.state();
            CHECK(after.drone_pos.x >= 0);
            CHECK(after.drone_pos.x <= 40);
            CHECK(after.drone_pos.y >= 0);
            CHECK(after.drone_pos.y <= 40);
            if (mode == TaskMode::Episodic) CHECK(after.step_count <= 150);
            CHECK(out.reward == reconstruct_reward(out, mode));
            if (out.info.boundary_violation) CHECK(before.drone_pos == after.drone_pos);
            if (out.terminal) {
                CHECK(mode == TaskMode::Episodic);
                CHECK(out.info.found != out.info.timeout);  // exactly one reason
            }
            if (out.info.found) {
                CHECK(out.info.distance_after < config.found_threshold);
                found_rewards += 1;
            }
        }
        if (mode == TaskMode::NonEpisodic) {
            CHECK(env.state().mailboxes_found == found_rewards);
        }
    }
}

TEST_CASE("identical seed and action sequence replays bit-exactly") {
    EnvConfig config;
    config.rng_seed = 123;
    GridWorld env_a(config, TaskMode::NonEpisodic);
    GridWorld env_b(config, TaskMode::NonEpisodic);
    Rng actions(5);
    for (int i = 0; i < 2000; ++i) {
        const Action a = static_cast<Action>(actions.uniform_index(4));
        const auto out_a = env_a.step(a);
        const auto out_b = env_b.step(a);
        REQUIRE(out_a.reward == out_b.reward);  // bit-exact, no tolerance
        REQUIRE(out_a.observation == out_b.observation);
    }
    CHECK(env_a.state().mailbox_pos == env_b.state().mailbox_pos);
}

TEST_CASE("config validation rejects a found threshold at or below half a step") {
    EnvConfig config;
    config.found_threshold = 0.5;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
}
