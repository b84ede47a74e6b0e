#include "rlintro/aggregate.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <stdexcept>

namespace rlintro {

AggregateStats aggregate_runs(const ProbeLog& log, long bucket_size, bool include_warmup) {
    if (bucket_size < 1) {
        throw std::invalid_argument("aggregate_runs: bucket_size must be at least 1");
    }
    // (probe, action, bucket) -> seed -> running sum/count.
    std::map<std::tuple<std::string, int, long>, std::map<long, std::pair<double, long>>> cells;
    for (const ProbeRow& row : log.rows) {
        if (row.warmup && !include_warmup) continue;
        const long bucket_start = (row.step - 1) / bucket_size * bucket_size;
        auto& per_seed =
            cells[{row.probe_label, static_cast<int>(row.action), bucket_start}][row.seed];
        per_seed.first += row.probability;
        per_seed.second += 1;
    }

    AggregateStats stats;
    stats.bucket_size = bucket_size;
    for (const auto& [key, per_seed] : cells) {
        std::vector<double> seed_means;
        seed_means.reserve(per_seed.size());
        for (const auto& [seed, sum_count] : per_seed) {
            seed_means.push_back(sum_count.first / static_cast<double>(sum_count.second));
        }
        double mean = 0.0;
        for (double m : seed_means) mean += m;
        mean /= static_cast<double>(seed_means.size());
        double variance = 0.0;
        for (double m : seed_means) variance += (m - mean) * (m - mean);
        variance /= static_cast<double>(seed_means.size());
        stats.rows.push_back({std::get<0>(key), static_cast<Action>(std::get<1>(key)),
                              std::get<2>(key), mean, std::sqrt(variance),
                              static_cast<int>(seed_means.size())});
    }
    return stats;
}

namespace {
constexpr const char* kCsvHeader = "probe_label,action,bucket_start,mean,std,n_seeds";
}

void write_aggregate_csv(const AggregateStats& stats, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("aggregate: cannot open " + path.string() + " for writing");
    }
    out << kCsvHeader << '\n';
    for (const AggregateRow& row : stats.rows) {
        out << format_csv_field(row.probe_label) << ',' << action_name(row.action) << ','
            << row.bucket_start << ',' << format_double(row.mean) << ','
            << format_double(row.std_dev) << ',' << row.n_seeds << '\n';
    }
    if (!out) throw std::runtime_error("aggregate: write failed for " + path.string());
}

namespace {

std::vector<std::string> split_simple(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
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

double to_double(const std::string& s, const char* what) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("aggregate: bad ") + what + " value \"" + s + "\"");
    }
    return v;
}

long to_long(const std::string& s, const char* what) {
    long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("aggregate: bad ") + what + " value \"" + s + "\"");
    }
    return v;
}

}  // namespace

AggregateStats read_aggregate_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("aggregate: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("aggregate: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw std::runtime_error("aggregate: unexpected header in " + path.string());
    }
    AggregateStats stats;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_simple(line);
        if (fields.size() != 6) {
            throw std::runtime_error("aggregate: expected 6 columns in " + path.string());
        }
        stats.rows.push_back({fields[0], action_from_name(fields[1]),
                              to_long(fields[2], "bucket_start"), to_double(fields[3], "mean"),
                              to_double(fields[4], "std"),
                              static_cast<int>(to_long(fields[5], "n_seeds"))});
    }
    return stats;
}

void write_aggregate_json(const AggregateStats& stats, const std::filesystem::path& path) {
    nlohmann::json rows = nlohmann::json::array();
    for (const AggregateRow& row : stats.rows) {
        rows.push_back({{"probe_label", row.probe_label},
                        {"action", action_name(row.action)},
                        {"bucket_start", row.bucket_start},
                        {"mean", row.mean},
                        {"std", row.std_dev},
                        {"n_seeds", row.n_seeds}});
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("aggregate: cannot open " + path.string() + " for writing");
    }
    out << nlohmann::json{{"bucket_size", stats.bucket_size}, {"rows", std::move(rows)}}.dump(2)
        << '\n';
    if (!out) throw std::runtime_error("aggregate: write failed for " + path.string());
}

AggregateStats read_aggregate_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("aggregate: cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("aggregate: malformed JSON in " + path.string() + ": " +
                                 e.what());
    }
    AggregateStats stats;
    try {
        stats.bucket_size = j.at("bucket_size").get<long>();
        for (const auto& r : j.at("rows")) {
            stats.rows.push_back({r.at("probe_label").get<std::string>(),
                                  action_from_name(r.at("action").get<std::string>()),
                                  r.at("bucket_start").get<long>(), r.at("mean").get<double>(),
                                  r.at("std").get<double>(), r.at("n_seeds").get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("aggregate: invalid schema in " + path.string() + ": " +
                                 e.what());
    }
    return stats;
}

}  // namespace rlintro
