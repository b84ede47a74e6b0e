#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rlintro/action.hpp"
#include "rlintro/introspection.hpp"

namespace rlintro {

// One logged (probe, action) sample. q_norm and probability stay zero until
// finalize_probabilities has run over the whole log, so that one consistent
// normalization window applies to a whole curve.
struct ProbeRow {
    long seed = 0;
    long step = 0;     // 1-based global environment step
    long episode = 0;  // completed-episode index (episodic) or trigger index
    std::string probe_label;
    int dist_bin = 0;  // distance component used for the probe observation
    Action action = Action::Left;
    double q_raw = 0.0;
    double q_norm = 0.0;
    double probability = 0.0;
    bool warmup = false;  // DQN rows logged before learning_starts
};

struct ProbeLog {
    std::vector<ProbeRow> rows;
};

using WindowKey = std::pair<long, std::string>;  // (seed, probe_label)

// Min/max of raw Q-values per (seed, probe), over all actions and instants.
std::map<WindowKey, NormalizationStats> normalization_windows(const ProbeLog& log);

// Fills q_norm and probability on every row. Cumulative window: one stats
// window per (seed, probe). Per-log window: the four action rows of each
// logging instant normalize against only themselves.
void finalize_probabilities(ProbeLog& log, const IntrospectionConfig& config);

// CSV schema (exact column order):
//   seed,step,episode,probe_label,dist_bin,action,q_raw,q_norm,probability
// RFC 4180, '.' decimal separator, shortest round-trip doubles.
void write_probe_log_csv(const ProbeLog& log, const std::filesystem::path& path);
ProbeLog read_probe_log_csv(const std::filesystem::path& path);

// JSON mirror of the CSV rows plus the warmup flag.
void write_probe_log_json(const ProbeLog& log, const std::filesystem::path& path);
ProbeLog read_probe_log_json(const std::filesystem::path& path);

// Formatting helpers shared by the CSV/JSON writers: shortest representation
// that parses back to the same double, locale-independent.
std::string format_double(double value);
std::string format_csv_field(const std::string& field);

}  // namespace rlintro
