#pragma once

#include <filesystem>

#include "rlintro/probe_log.hpp"

namespace rlintro {

struct AggregateRow {
    std::string probe_label;
    Action action = Action::Left;
    long bucket_start = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // population standard deviation across seeds
    int n_seeds = 0;

    friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct AggregateStats {
    long bucket_size = 500;
    std::vector<AggregateRow> rows;

    friend bool operator==(const AggregateStats&, const AggregateStats&) = default;
};

// Buckets probabilities by step, reduces each seed to its in-bucket mean,
// then takes mean and population std across the seeds present in that
// bucket. Warmup rows are skipped unless include_warmup is set. Rows are
// ordered by (probe_label, action, bucket_start).
AggregateStats aggregate_runs(const ProbeLog& log, long bucket_size, bool include_warmup = false);

// CSV columns (exact order): probe_label,action,bucket_start,mean,std,n_seeds
void write_aggregate_csv(const AggregateStats& stats, const std::filesystem::path& path);
AggregateStats read_aggregate_csv(const std::filesystem::path& path);

void write_aggregate_json(const AggregateStats& stats, const std::filesystem::path& path);
AggregateStats read_aggregate_json(const std::filesystem::path& path);

}  // namespace rlintro
