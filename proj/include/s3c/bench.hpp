#pragma once

#include <map>
#include <string>
#include <vector>

#include "s3c/io.hpp"
#include "s3c/metrics.hpp"
#include "s3c/pipeline.hpp"
#include "s3c/synth.hpp"

namespace s3c {

/// One (method, level, trial) execution with its metrics and a config
/// snapshot that replays it exactly.
struct TrialRecord {
    std::string method;
    double level = 0.0;  // corruption fraction or side-info fraction
    int trial = 0;
    std::uint64_t seed = 0;  // dataset seed; also the run seed
    double err = 0.0;
    double spr = 0.0;
    double conn = 0.0;
    int outer_iters = 0;
    double wall_time_s = 0.0;
    RunConfig snapshot;
};

struct TrialFailure {
    std::string method;
    double level = 0.0;
    int trial = 0;
    std::string message;
};

struct CellStats {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
    int count = 0;
};

/// Aggregates keyed by (method, level); levels in column order.
struct SweepSummary {
    std::vector<double> levels;
    std::vector<std::string> methods;
    std::map<std::pair<std::string, double>, CellStats> cells;
};

struct SweepResult {
    std::vector<TrialRecord> records;  // sorted by (level, trial, method)
    std::vector<TrialFailure> failures;
    SweepSummary summary;
};

/// Corruption sweep: for each (level, trial) one shared dataset, every
/// method run on it. `base` supplies trials/levels/methods/threads, the
/// synthesis spec, and the solver configuration.
SweepResult run_table1(const RunConfig& base);

/// Side-information sweep: datasets are paired across fractions (one dataset
/// per trial), constraints resampled per fraction. Methods default to the
/// constrained hard/soft pair.
SweepResult run_sideinfo_sweep(const RunConfig& base);

/// Re-executes a record from its snapshot; single-threaded and bitwise
/// reproducible.
TrialRecord replay_trial(const RunConfig& snapshot);

/// Runs one method on one dataset and evaluates it against the truth.
TrialRecord execute_trial(const RunConfig& snapshot, const SynthDataset& dataset);

/// Recomputes a summary from records (the aggregation used internally).
SweepSummary summarize(const std::vector<TrialRecord>& records,
                       const std::vector<double>& levels,
                       const std::vector<std::string>& methods);

/// Table-shaped CSV: method rows, one column per level ("0", "10%", ...).
std::string summary_csv(const SweepSummary& summary);

nlohmann::json record_to_json(const TrialRecord& record);
TrialRecord record_from_json(const nlohmann::json& j);

}  // namespace s3c
