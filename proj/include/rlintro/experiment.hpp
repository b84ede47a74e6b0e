#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "rlintro/aggregate.hpp"
#include "rlintro/env.hpp"
#include "rlintro/learner.hpp"
#include "rlintro/probe_log.hpp"

namespace rlintro {

enum class AgentKind { TabularQ, Sarsa, Dqn };

std::string agent_kind_name(AgentKind kind);
AgentKind agent_kind_from_name(const std::string& name);

struct ProbeSpec {
    std::string label;
    Vec2i position;
    long every_steps = 150;  // non-episodic logging cadence; episodic logs at episode ends
};

struct ExperimentConfig {
    TaskMode mode = TaskMode::Episodic;
    AgentKind agent = AgentKind::TabularQ;
    std::vector<long> seeds = {1, 2, 3, 4, 5};
    long total_steps = 35000;
    LearnerConfig learner;
    EnvConfig env;
    IntrospectionConfig introspection;
    std::vector<ProbeSpec> probes = default_probes();
    std::filesystem::path output_dir;
    int jobs = 0;  // worker threads over seeds; 0 = one per seed

    // One probe 2 m in from each of the two studied corners.
    static std::vector<ProbeSpec> default_probes();
};

void validate(const ExperimentConfig& config);

struct ExperimentResult {
    std::vector<long> seeds;
    std::vector<std::unique_ptr<QFunction>> qfunctions;  // aligned with seeds
    ProbeLog log;                                        // finalized probabilities
};

// The full protocol: trains one agent per seed (workers run in parallel, one
// environment and agent each), logs raw probe Q-values at every trigger,
// computes normalized values and probabilities over the configured window
// once training ends, and persists everything under output_dir:
//   qfunc_seed<k>.json, probelog.csv, norm_stats.json
ExperimentResult run_experiment(const ExperimentConfig& config);

// Normalization window sidecar written next to the probe log.
void write_norm_stats(const std::map<WindowKey, NormalizationStats>& windows,
                      const std::filesystem::path& path);
std::map<WindowKey, NormalizationStats> read_norm_stats(const std::filesystem::path& path);

}  // namespace rlintro
