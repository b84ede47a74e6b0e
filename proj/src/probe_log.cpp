#include "rlintro/probe_log.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "rlintro/explain.hpp"

namespace rlintro {

std::string format_double(double value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string format_csv_field(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::map<WindowKey, NormalizationStats> normalization_windows(const ProbeLog& log) {
    std::map<WindowKey, NormalizationStats> windows;
    for (const ProbeRow& row : log.rows) {
        NormalizationStats& stats = windows[{row.seed, row.probe_label}];
        if (stats.empty) {
            stats.window = "probe " + row.probe_label + ", seed " + std::to_string(row.seed) +
                           ", all logged actions and instants";
        }
        stats.update(row.q_raw);
    }
    return windows;
}

void finalize_probabilities(ProbeLog& log, const IntrospectionConfig& config) {
    validate(config);
    if (config.window == NormalizationWindow::Cumulative) {
        const auto windows = normalization_windows(log);
        for (ProbeRow& row : log.rows) {
            const NormalizationStats& stats = windows.at({row.seed, row.probe_label});
            const double q[1] = {row.q_raw};
            row.q_norm = normalize_q_state(q, stats, config)[0];
            row.probability = success_probability(row.q_norm, config);
        }
        return;
    }
    // Per-log window: group the rows of one logging instant.
    std::map<std::tuple<long, std::string, long, long>, NormalizationStats> windows;
    for (const ProbeRow& row : log.rows) {
        windows[{row.seed, row.probe_label, row.step, row.episode}].update(row.q_raw);
    }
    for (ProbeRow& row : log.rows) {
        const NormalizationStats& stats =
            windows.at({row.seed, row.probe_label, row.step, row.episode});
        const double q[1] = {row.q_raw};
        row.q_norm = normalize_q_state(q, stats, config)[0];
        row.probability = success_probability(row.q_norm, config);
    }
}

namespace {

constexpr const char* kCsvHeader =
    "seed,step,episode,probe_label,dist_bin,action,q_raw,q_norm,probability";

// Minimal RFC 4180 reader: quoted fields, escaped quotes, CRLF tolerant.
std::vector<std::string> split_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_double(const std::string& s, const char* what) {
    double value = 0.0;
    const auto result = std::from_chars(s.data(), s.data() + s.size(), value);
    if (result.ec != std::errc() || result.ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("probe log: bad ") + what + " value \"" + s + "\"");
    }
    return value;
}

long parse_long(const std::string& s, const char* what) {
    long value = 0;
    const auto result = std::from_chars(s.data(), s.data() + s.size(), value);
    if (result.ec != std::errc() || result.ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("probe log: bad ") + what + " value \"" + s + "\"");
    }
    return value;
}

}  // namespace

void write_probe_log_csv(const ProbeLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("probe log: cannot open " + path.string() + " for writing");
    }
    out << kCsvHeader << '\n';
    for (const ProbeRow& row : log.rows) {
        out << row.seed << ',' << row.step << ',' << row.episode << ','
            << format_csv_field(row.probe_label) << ',' << row.dist_bin << ','
            << action_name(row.action) << ',' << format_double(row.q_raw) << ','
            << format_double(row.q_norm) << ',' << format_double(row.probability) << '\n';
    }
    if (!out) throw std::runtime_error("probe log: write failed for " + path.string());
}

ProbeLog read_probe_log_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("probe log: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("probe log: empty file " + path.string());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw std::runtime_error("probe log: unexpected header in " + path.string());
    }
    ProbeLog log;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_record(line);
        if (fields.size() != 9) {
            throw std::runtime_error("probe log: expected 9 columns, got " +
                                     std::to_string(fields.size()) + " in " + path.string());
        }
        ProbeRow row;
        row.seed = parse_long(fields[0], "seed");
        row.step = parse_long(fields[1], "step");
        row.episode = parse_long(fields[2], "episode");
        row.probe_label = fields[3];
        row.dist_bin = static_cast<int>(parse_long(fields[4], "dist_bin"));
        row.action = action_from_name(fields[5]);
        row.q_raw = parse_double(fields[6], "q_raw");
        row.q_norm = parse_double(fields[7], "q_norm");
        row.probability = parse_double(fields[8], "probability");
        log.rows.push_back(std::move(row));
    }
    return log;
}

void write_probe_log_json(const ProbeLog& log, const std::filesystem::path& path) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ProbeRow& row : log.rows) {
        rows.push_back({{"seed", row.seed},
                        {"step", row.step},
                        {"episode", row.episode},
                        {"probe_label", row.probe_label},
                        {"dist_bin", row.dist_bin},
                        {"action", action_name(row.action)},
                        {"q_raw", row.q_raw},
                        {"q_norm", row.q_norm},
                        {"probability", row.probability},
                        {"warmup", row.warmup}});
    }
    // Rendered standalone explanation of the best action per logging instant;
    // derived data, skipped on import.
    nlohmann::json explanations = nlohmann::json::array();
    for (std::size_t i = 0; i + kNumActions <= log.rows.size();) {
        const ProbeRow& first = log.rows[i];
        SuccessProbability probs;
        bool complete = true;
        for (int a = 0; a < kNumActions; ++a) {
            const ProbeRow& row = log.rows[i + static_cast<std::size_t>(a)];
            complete = complete && row.seed == first.seed && row.step == first.step &&
                       row.probe_label == first.probe_label &&
                       row.action == static_cast<Action>(a);
            if (!complete) break;
            probs.per_action[static_cast<std::size_t>(a)] = row.probability;
        }
        if (!complete) {
            i += 1;
            continue;
        }
        const Action best = rank_actions(probs).front().first;
        explanations.push_back({{"seed", first.seed},
                                {"step", first.step},
                                {"probe_label", first.probe_label},
                                {"text", standalone_explanation(best, probs).text}});
        i += kNumActions;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("probe log: cannot open " + path.string() + " for writing");
    }
    out << nlohmann::json{{"rows", std::move(rows)}, {"explanations", std::move(explanations)}}
               .dump(2)
        << '\n';
    if (!out) throw std::runtime_error("probe log: write failed for " + path.string());
}

ProbeLog read_probe_log_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("probe log: cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("probe log: malformed JSON in " + path.string() + ": " +
                                 e.what());
    }
    ProbeLog log;
    try {
        for (const auto& r : j.at("rows")) {
            ProbeRow row;
            row.seed = r.at("seed").get<long>();
            row.step = r.at("step").get<long>();
            row.episode = r.at("episode").get<long>();
            row.probe_label = r.at("probe_label").get<std::string>();
            row.dist_bin = r.at("dist_bin").get<int>();
            row.action = action_from_name(r.at("action").get<std::string>());
            row.q_raw = r.at("q_raw").get<double>();
            row.q_norm = r.at("q_norm").get<double>();
            row.probability = r.at("probability").get<double>();
            row.warmup = r.value("warmup", false);
            log.rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("probe log: invalid schema in " + path.string() + ": " +
                                 e.what());
    }
    return log;
}

}  // namespace rlintro
