#include "rlintro/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <json.hpp>
#include <stdexcept>

#include "rlintro/mlp.hpp"
#include "rlintro/qfunction_io.hpp"
#include "rlintro/replay_buffer.hpp"

namespace rlintro {

std::string agent_kind_name(AgentKind kind) {
    switch (kind) {
        case AgentKind::TabularQ: return "tabular-q";
        case AgentKind::Sarsa: return "sarsa";
        case AgentKind::Dqn: return "dqn";
    }
    return "?";
}

AgentKind agent_kind_from_name(const std::string& name) {
    if (name == "tabular-q") return AgentKind::TabularQ;
    if (name == "sarsa") return AgentKind::Sarsa;
    if (name == "dqn") return AgentKind::Dqn;
    throw std::invalid_argument("unknown agent kind: " + name);
}

std::vector<ProbeSpec> ExperimentConfig::default_probes() {
    return {{"bottom_right", {38, 2}, 150}, {"top_left", {2, 38}, 150}};
}

void validate(const ExperimentConfig& config) {
    validate(config.env);
    validate(config.learner);
    validate(config.introspection);
    if (config.seeds.empty()) {
        throw std::invalid_argument("experiment: at least one seed is required");
    }
    if (config.total_steps <= 0) {
        throw std::invalid_argument("experiment: total_steps must be positive");
    }
    if (config.probes.empty()) {
        throw std::invalid_argument("experiment: at least one probe is required");
    }
    for (const ProbeSpec& probe : config.probes) {
        if (probe.label.empty()) {
            throw std::invalid_argument("experiment: probe labels must be non-empty");
        }
        if (probe.position.x < 0 || probe.position.x > config.env.side_length ||
            probe.position.y < 0 || probe.position.y > config.env.side_length) {
            throw std::invalid_argument("experiment: probe \"" + probe.label +
                                        "\" lies outside the square");
        }
        if (probe.every_steps < 1) {
            throw std::invalid_argument("experiment: probe every_steps must be at least 1");
        }
    }
    if (config.jobs < 0) {
        throw std::invalid_argument("experiment: jobs must be non-negative");
    }
}

namespace {

struct SeedRun {
    std::unique_ptr<QFunction> qfunction;
    std::vector<ProbeRow> rows;
};

void log_probes(std::vector<ProbeRow>& rows, const QFunction& qf, const ProbeSpec& probe,
                const WorldState& world, long seed, long step, long episode, bool warmup) {
    const AgentObservation obs{probe.position.x, probe.position.y,
                               distance_bin(probe.position, world.mailbox_pos)};
    const QValues q = qf.q_values(obs);
    for (int a = 0; a < kNumActions; ++a) {
        rows.push_back({seed, step, episode, probe.label, obs.dist_bin,
                        static_cast<Action>(a), q[static_cast<std::size_t>(a)], 0.0, 0.0,
                        warmup});
    }
}

SeedRun train_one_seed(const ExperimentConfig& config, long seed) {
    LearnerConfig learner = config.learner;
    learner.total_steps = config.total_steps;
    learner.update_rule =
        config.agent == AgentKind::Sarsa ? UpdateRule::Sarsa : UpdateRule::QLearning;

    EnvConfig env_config = config.env;
    env_config.rng_seed = derive_seed(static_cast<std::uint64_t>(seed), 0);
    GridWorld env(env_config, config.mode);
    Rng agent_rng(derive_seed(static_cast<std::uint64_t>(seed), 1));

    const bool is_dqn = config.agent == AgentKind::Dqn;
    QTable table(0.0);
    std::unique_ptr<MlpQNetwork> net;
    std::unique_ptr<ReplayBuffer> buffer;
    if (is_dqn) {
        net = std::make_unique<MlpQNetwork>(learner.hidden_sizes, env_config.side_length,
                                            agent_rng);
        buffer = std::make_unique<ReplayBuffer>(learner.buffer_capacity);
    }
    const QFunction& qf = is_dqn ? static_cast<const QFunction&>(*net)
                                 : static_cast<const QFunction&>(table);

    SeedRun run;
    AgentObservation obs = observe(env.state());
    std::optional<Action> pending;  // SARSA carries the next action across steps
    long episode = 0;
    std::vector<long> trigger_counts(config.probes.size(), 0);

    for (long step = 1; step <= config.total_steps; ++step) {
        const Action action =
            pending ? *pending : select_action(qf, obs, epsilon_at(learner, step - 1), agent_rng);
        pending.reset();
        const StepOutcome out = env.step(action);
        const Transition transition{obs, action, out.reward, out.observation, out.terminal};

        if (is_dqn) {
            buffer->push(transition);
            if (step >= learner.learning_starts) {
                dqn_train_step(*net, *buffer, learner, step, agent_rng);
            }
        } else if (learner.update_rule == UpdateRule::Sarsa && !transition.terminal) {
            pending = select_action(qf, out.observation, epsilon_at(learner, step), agent_rng);
            td_update(table, transition, learner, pending);
        } else {
            td_update(table, transition, learner);
        }

        const bool warmup = is_dqn && step < learner.learning_starts;
        if (config.mode == TaskMode::Episodic) {
            if (out.terminal) {
                for (const ProbeSpec& probe : config.probes) {
                    log_probes(run.rows, qf, probe, env.state(), seed, step, episode, warmup);
                }
                episode += 1;
                obs = env.reset();
                pending.reset();
            } else {
                obs = out.observation;
            }
        } else {
            for (std::size_t p = 0; p < config.probes.size(); ++p) {
                if (step % config.probes[p].every_steps == 0) {
                    log_probes(run.rows, qf, config.probes[p], env.state(), seed, step,
                               trigger_counts[p], warmup);
                    trigger_counts[p] += 1;
                }
            }
            obs = out.observation;
        }
    }

    if (is_dqn) {
        run.qfunction = std::move(net);
    } else {
        run.qfunction = std::make_unique<QTable>(std::move(table));
    }
    return run;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate(config);
    if (config.output_dir.empty()) {
        throw std::invalid_argument("experiment: output_dir is required");
    }
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
        throw std::runtime_error("experiment: cannot create output_dir " +
                                 config.output_dir.string() + ": " + ec.message());
    }
    {
        const auto sentinel = config.output_dir / ".write_test";
        std::ofstream probe_file(sentinel);
        if (!probe_file) {
            throw std::runtime_error("experiment: output_dir " + config.output_dir.string() +
                                     " is not writable");
        }
        probe_file.close();
        std::filesystem::remove(sentinel, ec);
    }

    const std::size_t n_seeds = config.seeds.size();
    std::vector<SeedRun> runs(n_seeds);
    const std::size_t jobs =
        config.jobs == 0 ? n_seeds
                         : std::min<std::size_t>(static_cast<std::size_t>(config.jobs), n_seeds);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n_seeds; ++i) {
            runs[i] = train_one_seed(config, config.seeds[i]);
        }
    } else {
        std::vector<std::future<SeedRun>> futures;
        futures.reserve(n_seeds);
        for (std::size_t i = 0; i < n_seeds; ++i) {
            futures.push_back(std::async(std::launch::async, train_one_seed, std::cref(config),
                                         config.seeds[i]));
        }
        for (std::size_t i = 0; i < n_seeds; ++i) runs[i] = futures[i].get();
    }

    ExperimentResult result;
    result.seeds = config.seeds;
    // Merge per-seed logs ordered by seed value; each worker's rows are
    // already in chronological order.
    std::vector<std::size_t> order(n_seeds);
    for (std::size_t i = 0; i < n_seeds; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return config.seeds[a] < config.seeds[b]; });
    for (std::size_t i : order) {
        result.log.rows.insert(result.log.rows.end(), runs[i].rows.begin(), runs[i].rows.end());
    }
    for (std::size_t i = 0; i < n_seeds; ++i) {
        result.qfunctions.push_back(std::move(runs[i].qfunction));
    }

    finalize_probabilities(result.log, config.introspection);

    for (std::size_t i = 0; i < n_seeds; ++i) {
        save_qfunction(*result.qfunctions[i],
                       config.output_dir /
                           ("qfunc_seed" + std::to_string(config.seeds[i]) + ".json"));
    }
    write_probe_log_csv(result.log, config.output_dir / "probelog.csv");
    write_norm_stats(normalization_windows(result.log), config.output_dir / "norm_stats.json");
    return result;
}

void write_norm_stats(const std::map<WindowKey, NormalizationStats>& windows,
                      const std::filesystem::path& path) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, stats] : windows) {
        entries.push_back({{"seed", key.first},
                           {"probe_label", key.second},
                           {"q_min", stats.q_min},
                           {"q_max", stats.q_max}});
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("norm stats: cannot open " + path.string() + " for writing");
    }
    out << nlohmann::json{{"windows", std::move(entries)}}.dump(2) << '\n';
    if (!out) throw std::runtime_error("norm stats: write failed for " + path.string());
}

std::map<WindowKey, NormalizationStats> read_norm_stats(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("norm stats: cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("norm stats: malformed JSON in " + path.string() + ": " +
                                 e.what());
    }
    std::map<WindowKey, NormalizationStats> windows;
    try {
        for (const auto& entry : j.at("windows")) {
            NormalizationStats stats;
            stats.q_min = entry.at("q_min").get<double>();
            stats.q_max = entry.at("q_max").get<double>();
            stats.empty = false;
            const WindowKey key{entry.at("seed").get<long>(),
                                entry.at("probe_label").get<std::string>()};
            stats.window = "probe " + key.second + ", seed " + std::to_string(key.first);
            windows[key] = stats;
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("norm stats: invalid schema in " + path.string() + ": " +
                                 e.what());
    }
    return windows;
}

}  // namespace rlintro
