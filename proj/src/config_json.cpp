#include "rlintro/config_json.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <stdexcept>

namespace rlintro {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
        }
    }
}

TaskMode parse_mode(const std::string& s) {
    if (s == "episodic") return TaskMode::Episodic;
    if (s == "non-episodic") return TaskMode::NonEpisodic;
    throw std::invalid_argument("config: mode must be \"episodic\" or \"non-episodic\", got \"" +
                                s + "\"");
}

void parse_env(const json& j, EnvConfig& env) {
    reject_unknown_keys(j, {"side_length", "step_length", "found_threshold", "time_limit",
                            "rng_seed"},
                        "env");
    if (j.contains("side_length")) env.side_length = j.at("side_length").get<int>();
    if (j.contains("step_length")) env.step_length = j.at("step_length").get<int>();
    if (j.contains("found_threshold")) {
        env.found_threshold = j.at("found_threshold").get<double>();
    }
    if (j.contains("time_limit")) {
        if (j.at("time_limit").is_null()) {
            env.time_limit.reset();
        } else {
            env.time_limit = j.at("time_limit").get<int>();
        }
    }
    if (j.contains("rng_seed")) env.rng_seed = j.at("rng_seed").get<std::uint64_t>();
}

void parse_learner(const json& j, LearnerConfig& learner) {
    reject_unknown_keys(j, {"alpha", "gamma", "epsilon", "total_steps", "learning_starts",
                            "update_rule", "buffer_capacity", "batch_size", "target_sync",
                            "hidden_sizes"},
                        "learner");
    if (j.contains("alpha")) learner.alpha = j.at("alpha").get<double>();
    if (j.contains("gamma")) learner.gamma = j.at("gamma").get<double>();
    if (j.contains("epsilon")) {
        const json& e = j.at("epsilon");
        reject_unknown_keys(e, {"start", "end", "decay_fraction"}, "learner.epsilon");
        if (e.contains("start")) learner.epsilon.start = e.at("start").get<double>();
        if (e.contains("end")) learner.epsilon.end = e.at("end").get<double>();
        if (e.contains("decay_fraction")) {
            learner.epsilon.decay_fraction = e.at("decay_fraction").get<double>();
        }
    }
    if (j.contains("total_steps")) learner.total_steps = j.at("total_steps").get<long>();
    if (j.contains("learning_starts")) {
        learner.learning_starts = j.at("learning_starts").get<long>();
    }
    if (j.contains("update_rule")) {
        const std::string rule = j.at("update_rule").get<std::string>();
        if (rule == "q-learning") {
            learner.update_rule = UpdateRule::QLearning;
        } else if (rule == "sarsa") {
            learner.update_rule = UpdateRule::Sarsa;
        } else {
            throw std::invalid_argument("config: update_rule must be \"q-learning\" or "
                                        "\"sarsa\", got \"" +
                                        rule + "\"");
        }
    }
    if (j.contains("buffer_capacity")) {
        learner.buffer_capacity = j.at("buffer_capacity").get<std::size_t>();
    }
    if (j.contains("batch_size")) learner.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("target_sync")) learner.target_sync = j.at("target_sync").get<long>();
    if (j.contains("hidden_sizes")) {
        learner.hidden_sizes = j.at("hidden_sizes").get<std::vector<int>>();
    }
}

void parse_introspection(const json& j, IntrospectionConfig& intro) {
    reject_unknown_keys(
        j, {"r_max", "sigma", "b", "gamma", "verbatim_normalization", "window"},
        "introspection");
    if (j.contains("r_max")) intro.r_max = j.at("r_max").get<double>();
    if (j.contains("b")) {
        intro.b = j.at("b").get<double>();
    } else {
        intro.b = intro.r_max / 1000.0;  // default floor follows the reward scale
    }
    if (j.contains("sigma")) intro.sigma = j.at("sigma").get<double>();
    if (j.contains("gamma")) intro.gamma = j.at("gamma").get<double>();
    if (j.contains("verbatim_normalization")) {
        intro.verbatim_normalization = j.at("verbatim_normalization").get<bool>();
    }
    if (j.contains("window")) {
        const std::string w = j.at("window").get<std::string>();
        if (w == "cumulative") {
            intro.window = NormalizationWindow::Cumulative;
        } else if (w == "per-log") {
            intro.window = NormalizationWindow::PerLog;
        } else {
            throw std::invalid_argument(
                "config: window must be \"cumulative\" or \"per-log\", got \"" + w + "\"");
        }
    }
}

std::vector<ProbeSpec> parse_probes(const json& j) {
    std::vector<ProbeSpec> probes;
    for (const json& p : j) {
        reject_unknown_keys(p, {"label", "position", "every_steps"}, "probes[]");
        ProbeSpec probe;
        probe.label = p.at("label").get<std::string>();
        const json& pos = p.at("position");
        if (!pos.is_array() || pos.size() != 2) {
            throw std::invalid_argument("config: probe position must be [x, y]");
        }
        probe.position = {pos.at(0).get<int>(), pos.at(1).get<int>()};
        if (p.contains("every_steps")) probe.every_steps = p.at("every_steps").get<long>();
        probes.push_back(std::move(probe));
    }
    return probes;
}

ExperimentConfig parse_config_json(const json& j) {
    reject_unknown_keys(j, {"mode", "agent", "seeds", "total_steps", "learner", "env",
                            "introspection", "probes", "output_dir", "jobs"},
                        "the top level");
    ExperimentConfig config;
    if (j.contains("mode")) config.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("agent")) {
        config.agent = agent_kind_from_name(j.at("agent").get<std::string>());
    }
    if (j.contains("seeds")) config.seeds = j.at("seeds").get<std::vector<long>>();
    if (j.contains("total_steps")) config.total_steps = j.at("total_steps").get<long>();
    if (j.contains("learner")) parse_learner(j.at("learner"), config.learner);
    if (j.contains("env")) parse_env(j.at("env"), config.env);
    if (j.contains("introspection")) {
        parse_introspection(j.at("introspection"), config.introspection);
    }
    if (j.contains("probes")) config.probes = parse_probes(j.at("probes"));
    if (j.contains("output_dir")) {
        config.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("jobs")) config.jobs = j.at("jobs").get<int>();
    return config;
}

}  // namespace

ExperimentConfig parse_experiment_config_text(const std::string& text,
                                              const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: malformed JSON in " + origin + ": " + e.what());
    }
    try {
        return parse_config_json(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: invalid value in " + origin + ": " + e.what());
    }
}

ExperimentConfig parse_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_experiment_config_text(text, path.string());
}

}  // namespace rlintro
