#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rlintro/config_json.hpp"
#include "rlintro/explain.hpp"
#include "rlintro/qfunction_io.hpp"
#include "rlintro/value_iteration.hpp"

namespace {

using namespace rlintro;

bool has_json_extension(const std::filesystem::path& path) {
    return path.extension() == ".json";
}

ProbeLog read_any_probe_log(const std::filesystem::path& path) {
    return has_json_extension(path) ? read_probe_log_json(path) : read_probe_log_csv(path);
}

int cmd_train(const std::string& config_path, const std::optional<std::string>& mode,
              const std::optional<std::string>& agent, const std::vector<long>& seeds,
              const std::optional<std::string>& out_dir) {
    ExperimentConfig config = parse_experiment_config(config_path);
    if (mode) {
        config.mode = *mode == "episodic" ? TaskMode::Episodic : TaskMode::NonEpisodic;
    }
    if (agent) config.agent = agent_kind_from_name(*agent);
    if (!seeds.empty()) config.seeds = seeds;
    if (out_dir) config.output_dir = *out_dir;
    if (config.output_dir.empty()) config.output_dir = "out";

    const ExperimentResult result = run_experiment(config);
    std::cout << "trained " << result.seeds.size() << " "
              << agent_kind_name(config.agent) << " agent(s), "
              << result.log.rows.size() << " probe rows -> " << config.output_dir.string()
              << "\n";
    return 0;
}

int cmd_aggregate(const std::string& log_path, long bucket, const std::string& out_path,
                  const std::string& format, long min_step) {
    ProbeLog log = read_any_probe_log(log_path);
    if (min_step > 0) {
        std::erase_if(log.rows, [min_step](const ProbeRow& r) { return r.step < min_step; });
    }
    const AggregateStats stats = aggregate_runs(log, bucket);
    if (format == "json") {
        write_aggregate_json(stats, out_path);
    } else {
        write_aggregate_csv(stats, out_path);
    }
    std::cout << "aggregated " << stats.rows.size() << " buckets -> " << out_path << "\n";
    return 0;
}

int cmd_export(const std::string& log_path, const std::string& format,
               const std::string& out_path) {
    const ProbeLog log = read_any_probe_log(log_path);
    if (format == "json") {
        write_probe_log_json(log, out_path);
    } else {
        write_probe_log_csv(log, out_path);
    }
    std::cout << "exported " << log.rows.size() << " rows -> " << out_path << "\n";
    return 0;
}

NormalizationStats stats_from_windows(const std::map<WindowKey, NormalizationStats>& windows,
                                      const std::optional<std::string>& probe_label,
                                      const std::optional<long>& seed) {
    NormalizationStats merged;
    for (const auto& [key, stats] : windows) {
        if (probe_label && key.second != *probe_label) continue;
        if (seed && key.first != *seed) continue;
        merged.update(stats.q_min);
        merged.update(stats.q_max);
    }
    return merged;
}

int cmd_explain(const std::string& qfunc_path, const std::vector<int>& probe,
                const std::vector<double>& mailbox, const std::string& chosen,
                const std::optional<std::string>& contrast,
                const std::optional<std::string>& log_path,
                const std::optional<std::string>& stats_path,
                const std::optional<std::string>& probe_label, const std::optional<long>& seed,
                const IntrospectionConfig& intro) {
    const auto qf = load_qfunction(qfunc_path);

    NormalizationStats stats;
    if (stats_path) {
        stats = stats_from_windows(read_norm_stats(*stats_path), probe_label, seed);
    } else if (log_path) {
        ProbeLog log = read_any_probe_log(*log_path);
        for (const ProbeRow& row : log.rows) {
            if (probe_label && row.probe_label != *probe_label) continue;
            if (seed && row.seed != *seed) continue;
            stats.update(row.q_raw);
        }
    } else {
        throw std::invalid_argument(
            "explain: no normalization window; supply --log with the run's ProbeLog "
            "(or --stats with its norm_stats.json)");
    }
    if (stats.empty) {
        throw std::invalid_argument(
            "explain: the supplied window has no rows for this probe/seed selection; "
            "supply a ProbeLog that covers the probe state");
    }

    const Vec2i probe_pos{probe[0], probe[1]};
    const Vec2d mailbox_pos{mailbox[0], mailbox[1]};
    const AgentObservation obs{probe_pos.x, probe_pos.y, distance_bin(probe_pos, mailbox_pos)};
    // The queried values are themselves observations of the agent's Q-values
    // at this state; fold them into the cumulative window.
    stats.update(qf->q_values(obs));
    const SuccessProbability probs = state_probabilities(*qf, obs, stats, intro);

    const Action chosen_action = action_from_name(chosen);
    const Explanation explanation =
        contrast ? contrastive_explanation(chosen_action, action_from_name(*contrast), probs)
                 : standalone_explanation(chosen_action, probs);
    std::cout << explanation.text << "\n";
    return 0;
}

int cmd_oracle(int grid, const std::string& out_path, const std::vector<double>& mailbox,
               double gamma, double found_threshold, double tol) {
    if (grid < 3) throw std::invalid_argument("oracle: grid must be at least 3");
    EnvConfig config;
    config.side_length = grid - 1;  // grid counts lattice positions per axis
    config.found_threshold = found_threshold;
    config.time_limit.reset();
    config.fixed_mailbox =
        mailbox.empty() ? Vec2d{2.0, static_cast<double>(grid - 3)} : Vec2d{mailbox[0], mailbox[1]};
    const QTable q_star = value_iteration(config, gamma, tol);
    save_qfunction(q_star, out_path);
    std::cout << "value iteration fixed point over " << q_star.size() << " states -> "
              << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Q-value introspection pipeline for the drone-search gridworld"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Run the multi-seed training protocol");
    std::string config_path;
    std::optional<std::string> train_mode, train_agent, train_out;
    std::vector<long> train_seeds;
    train->add_option("--config", config_path, "Experiment config JSON")->required();
    train->add_option("--mode", train_mode, "episodic|non-episodic")
        ->check(CLI::IsMember({"episodic", "non-episodic"}));
    train->add_option("--agent", train_agent, "tabular-q|sarsa|dqn")
        ->check(CLI::IsMember({"tabular-q", "sarsa", "dqn"}));
    train->add_option("--seeds", train_seeds, "Comma-separated seed list")->delimiter(',');
    train->add_option("--out", train_out, "Output directory");

    // aggregate
    auto* aggregate = app.add_subcommand("aggregate", "Cross-seed mean/std per step bucket");
    std::string agg_log, agg_out, agg_format = "csv";
    long agg_bucket = 500, agg_min_step = 0;
    aggregate->add_option("--log", agg_log, "ProbeLog file (.csv or .json)")->required();
    aggregate->add_option("--bucket", agg_bucket, "Step bucket size");
    aggregate->add_option("--out", agg_out, "Output file")->required();
    aggregate->add_option("--format", agg_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    aggregate->add_option("--min-step", agg_min_step,
                          "Drop rows before this step (e.g. DQN warmup)");

    // export
    auto* exp = app.add_subcommand("export", "Convert a ProbeLog between csv and json");
    std::string exp_log, exp_format, exp_out;
    exp->add_option("--log", exp_log, "ProbeLog file (.csv or .json)")->required();
    exp->add_option("--format", exp_format, "csv|json")
        ->required()
        ->check(CLI::IsMember({"csv", "json"}));
    exp->add_option("--out", exp_out, "Output file")->required();

    // explain
    auto* explain = app.add_subcommand("explain", "Explain an action at a probe state");
    std::string exq, exchosen;
    std::vector<int> exprobe;
    std::vector<double> exmailbox;
    std::optional<std::string> excontrast, exlog, exstats, exlabel;
    std::optional<long> exseed;
    IntrospectionConfig exintro;
    explain->add_option("--qfunc", exq, "Q-function JSON file")->required();
    explain->add_option("--probe", exprobe, "Probe position x,y")
        ->required()
        ->delimiter(',')
        ->expected(2);
    explain->add_option("--mailbox", exmailbox, "Mailbox position x,y")
        ->required()
        ->delimiter(',')
        ->expected(2);
    explain->add_option("--chosen", exchosen, "left|right|forward|backward")->required();
    explain->add_option("--contrast", excontrast, "Contrast action for the counterfactual");
    explain->add_option("--log", exlog, "ProbeLog supplying the normalization window");
    explain->add_option("--stats", exstats, "norm_stats.json supplying the window");
    explain->add_option("--probe-label", exlabel, "Restrict the window to this probe");
    explain->add_option("--seed", exseed, "Restrict the window to this seed");
    explain->add_option("--r-max", exintro.r_max, "Maximum reward R^M");
    explain->add_option("--sigma", exintro.sigma, "Stochasticity correction");
    explain->add_option("--b", exintro.b, "Normalization floor");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Value-iteration fixed point for tests");
    int ogrid = 10;
    std::string oout;
    std::vector<double> omailbox;
    double ogamma = 0.99, othreshold = 2.0, otol = 1e-9;
    oracle->add_option("--grid", ogrid, "Lattice positions per axis");
    oracle->add_option("--out", oout, "Output Q-function JSON")->required();
    oracle->add_option("--mailbox", omailbox, "Fixed mailbox x,y")->delimiter(',')->expected(2);
    oracle->add_option("--gamma", ogamma, "Discount");
    oracle->add_option("--found-threshold", othreshold, "Found distance threshold");
    oracle->add_option("--tol", otol, "Fixed-point tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            return cmd_train(config_path, train_mode, train_agent, train_seeds, train_out);
        }
        if (aggregate->parsed()) {
            return cmd_aggregate(agg_log, agg_bucket, agg_out, agg_format, agg_min_step);
        }
        if (exp->parsed()) return cmd_export(exp_log, exp_format, exp_out);
        if (explain->parsed()) {
            return cmd_explain(exq, exprobe, exmailbox, exchosen, excontrast, exlog, exstats,
                               exlabel, exseed, exintro);
        }
        if (oracle->parsed()) {
            return cmd_oracle(ogrid, oout, omailbox, ogamma, othreshold, otol);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
