#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rlintro/learner.hpp"
#include "rlintro/mlp.hpp"
#include "rlintro/qfunction_io.hpp"
#include "rlintro/replay_buffer.hpp"

using namespace rlintro;

TEST_CASE("fresh table reads the default everywhere without mutating") {
    QTable table(0.0);
    const AgentObservation obs{5, 5, 12};
    CHECK(table.q_values(obs) == QValues{0.0, 0.0, 0.0, 0.0});
    CHECK(table.size() == 0);
    CHECK_FALSE(table.contains(obs));
}

TEST_CASE("a single update touches only the updated action") {
    QTable table(0.0);
    LearnerConfig config;
    config.alpha = 0.5;
    const AgentObservation s{1, 1, 3};
    const AgentObservation s2{1, 2, 2};
    td_update(table, {s, Action::Forward, 1.0, s2, false}, config);
    const QValues q = table.q_values(s);
    CHECK(q[0] == 0.0);
    CHECK(q[1] == 0.0);
    CHECK(q[2] != 0.0);
    CHECK(q[3] == 0.0);
}

TEST_CASE("q-learning update arithmetic") {
    QTable table(0.0);
    const AgentObservation s{0, 0, 5};
    const AgentObservation s2{0, 1, 4};
    table.at(s2, Action::Left) = 2.0;  // max over s'
    LearnerConfig config;
    config.alpha = 0.5;
    config.gamma = 0.9;
    td_update(table, {s, Action::Right, 1.0, s2, false}, config);
    CHECK(table.q_values(s)[1] == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("terminal transitions bootstrap from zero") {
    QTable table(0.0);
    LearnerConfig config;
    config.alpha = 0.5;
    const AgentObservation s{2, 2, 1};
    td_update(table, {s, Action::Left, 100.0, s, true}, config);
    CHECK(table.q_values(s)[0] == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("alpha zero is rejected by validation but acts as a zero step size") {
    LearnerConfig config;
    config.alpha = 0.0;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    QTable table(0.0);
    const AgentObservation s{4, 4, 4};
    table.at(s, Action::Forward) = 1.5;
    td_update(table, {s, Action::Forward, 10.0, s, false}, config);
    CHECK(table.q_values(s)[2] == 1.5);  // unchanged
}

TEST_CASE("sarsa uses the provided next action and demands one") {
    QTable table(0.0);
    const AgentObservation s{0, 0, 5};
    const AgentObservation s2{0, 1, 4};
    table.at(s2, Action::Backward) = 2.0;
    table.at(s2, Action::Left) = 9.0;  // must be ignored by SARSA
    LearnerConfig config;
    config.alpha = 0.5;
    config.gamma = 0.9;
    config.update_rule = UpdateRule::Sarsa;
    td_update(table, {s, Action::Right, 1.0, s2, false}, config, Action::Backward);
    CHECK(table.q_values(s)[1] == doctest::Approx(1.4).epsilon(1e-12));

    CHECK_THROWS_AS(td_update(table, {s, Action::Right, 1.0, s2, false}, config),
                    std::invalid_argument);
    // Terminal SARSA transitions need no next action.
    td_update(table, {s, Action::Right, 1.0, s2, true}, config);
}

TEST_CASE("the update is a contraction toward the Bellman target") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        QTable table(0.0);
        LearnerConfig config;
        config.alpha = 0.05 + 0.95 * rng.uniform01();
        config.gamma = 0.9;
        const AgentObservation s{1, 0, 2};
        const AgentObservation s2{2, 0, 1};
        table.at(s, Action::Left) = rng.uniform(-50.0, 50.0);
        table.at(s2, Action::Forward) = rng.uniform(-50.0, 50.0);
        const double reward = rng.uniform(-10.0, 10.0);
        const QValues next_q = table.q_values(s2);
        const double target =
            reward + config.gamma * *std::max_element(next_q.begin(), next_q.end());
        const double before = std::abs(table.q_values(s)[0] - target);
        td_update(table, {s, Action::Left, reward, s2, false}, config);
        const double after = std::abs(table.q_values(s)[0] - target);
        CHECK(after == doctest::Approx((1.0 - config.alpha) * before).epsilon(1e-9));
    }
}

TEST_CASE("epsilon schedule decays linearly then holds the floor") {
    LearnerConfig config;  // 1.0 -> 0.05 over the first 3500 of 35000 steps
    CHECK(epsilon_at(config, 0) == doctest::Approx(1.0));
    CHECK(epsilon_at(config, 1750) == doctest::Approx(0.525).epsilon(1e-9));
    CHECK(epsilon_at(config, 3500) == doctest::Approx(0.05));
    CHECK(epsilon_at(config, 34999) == doctest::Approx(0.05));
    double prev = 2.0;
    for (long step = 0; step < 35000; step += 50) {
        const double eps = epsilon_at(config, step);
        CHECK(eps <= prev);
        CHECK(eps >= 0.05);
        CHECK(eps <= 1.0);
        prev = eps;
    }
}

TEST_CASE("selection rejects epsilon outside the unit interval") {
    QTable table(0.0);
    Rng rng(1);
    CHECK_THROWS_AS(select_action(table, {0, 0, 0}, -0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(select_action(table, {0, 0, 0}, 1.1, rng), std::invalid_argument);
}

TEST_CASE("greedy selection takes the argmax") {
    QTable table(0.0);
    const AgentObservation s{3, 3, 3};
    table.at(s, Action::Left) = 1.0;
    table.at(s, Action::Right) = 3.0;
    table.at(s, Action::Forward) = 2.0;
    table.at(s, Action::Backward) = 0.0;
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(select_action(table, s, 0.0, rng) == Action::Right);
}

TEST_CASE("epsilon one explores uniformly") {
    QTable table(0.0);
    const AgentObservation s{3, 3, 3};
    Rng rng(7);
    std::array<long, 4> counts{};
    const long draws = 100000;
    for (long i = 0; i < draws; ++i) {
        counts[static_cast<std::size_t>(select_action(table, s, 1.0, rng))] += 1;
    }
    for (long c : counts) {
        CHECK(static_cast<double>(c) / draws == doctest::Approx(0.25).epsilon(0.08));
    }
}

TEST_CASE("exact ties break uniformly") {
    QTable table(0.0);
    const AgentObservation s{3, 3, 3};
    table.at(s, Action::Left) = 5.0;
    table.at(s, Action::Right) = 5.0;
    table.at(s, Action::Forward) = 1.0;
    table.at(s, Action::Backward) = 1.0;
    Rng rng(13);
    std::array<long, 4> counts{};
    for (int i = 0; i < 10000; ++i) {
        counts[static_cast<std::size_t>(select_action(table, s, 0.0, rng))] += 1;
    }
    CHECK(counts[2] == 0);
    CHECK(counts[3] == 0);
    CHECK(static_cast<double>(counts[0]) / 10000 == doctest::Approx(0.5).epsilon(0.06));
    CHECK(static_cast<double>(counts[1]) / 10000 == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("replay buffer ring semantics") {
    ReplayBuffer buffer(4);
    for (int i = 0; i < 6; ++i) {
        buffer.push({{i, 0, 0}, Action::Left, static_cast<double>(i), {i, 0, 0}, false});
    }
    CHECK(buffer.size() == 4);
    // Oldest two were overwritten: rewards 2..5 remain.
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Transition& t = buffer.sample(rng);
        CHECK(t.reward >= 2.0);
        CHECK(t.reward <= 5.0);
    }
    CHECK(buffer.sample_batch(32, rng).size() == 32);
}

TEST_CASE("qtable save/load round-trips all states") {
    const auto path = std::filesystem::temp_directory_path() / "rlintro_qtable_rt.json";
    QTable table(0.5);
    const std::vector<AgentObservation> states = {{0, 0, 1}, {7, 3, 9}, {40, 40, 56}};
    double v = -3.25;
    for (const auto& s : states) {
        for (Action a : all_actions()) {
            table.at(s, a) = v;
            v += 1.125;
        }
    }
    save_qfunction(table, path);
    const auto loaded = load_qfunction(path);
    REQUIRE(loaded->kind() == "tabular");
    for (const auto& s : states) CHECK(loaded->q_values(s) == table.q_values(s));
    CHECK(loaded->q_values({9, 9, 9}) == QValues{0.5, 0.5, 0.5, 0.5});
    std::filesystem::remove(path);
}

TEST_CASE("mlp save/load reproduces outputs bit-exactly") {
    const auto path = std::filesystem::temp_directory_path() / "rlintro_mlp_rt.json";
    Rng rng(99);
    MlpQNetwork net({16, 16}, 40, rng);
    save_qfunction(net, path);
    const auto loaded = load_qfunction(path);
    REQUIRE(loaded->kind() == "mlp");
    Rng obs_rng(5);
    for (int i = 0; i < 100; ++i) {
        const AgentObservation obs{static_cast<int>(obs_rng.uniform_index(41)),
                                   static_cast<int>(obs_rng.uniform_index(41)),
                                   static_cast<int>(obs_rng.uniform_index(58))};
        CHECK(loaded->q_values(obs) == net.q_values(obs));  // tolerance 0
    }
    std::filesystem::remove(path);
}

TEST_CASE("truncated and malformed files load as errors, not partial tables") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto good = dir / "rlintro_good.json";
    const auto bad = dir / "rlintro_trunc.json";
    QTable table(0.0);
    table.at({1, 2, 3}, Action::Left) = 4.0;
    save_qfunction(table, good);

    std::string text;
    {
        std::ifstream in(good);
        text.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    {
        std::ofstream out(bad);
        out << text.substr(0, text.size() / 2);
    }
    CHECK_THROWS_AS(load_qfunction(bad), std::runtime_error);
    CHECK_THROWS_AS(load_qfunction(dir / "rlintro_does_not_exist.json"), std::runtime_error);

    {
        std::ofstream out(bad);
        out << R"({"kind":"tabular","version":2,"default":0,"entries":[]})";
    }
    CHECK_THROWS_AS(load_qfunction(bad), std::runtime_error);

    {
        std::ofstream out(bad);
        out << R"({"kind":"forest","version":1})";
    }
    CHECK_THROWS_AS(load_qfunction(bad), std::runtime_error);

    std::filesystem::remove(good);
    std::filesystem::remove(bad);
}
