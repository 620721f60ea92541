#include "s3c/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include <nlohmann/json.hpp>

#include "s3c/rng.hpp"

namespace s3c {

namespace {

using nlohmann::json;

std::uint64_t level_key(double level) {
    return static_cast<std::uint64_t>(std::llround(level * 1e6));
}

/// Fixed-size job pool; each job writes only its own slot, so the result is
/// independent of scheduling.
void run_jobs(int threads, int count, const std::function<void(int)>& job) {
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(threads, count);
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::string level_label(double level) {
    if (level == 0.0) return "0";
    const double pct = level * 100.0;
    char buf[32];
    if (std::abs(pct - std::round(pct)) < 1e-9) {
        std::snprintf(buf, sizeof(buf), "%d%%", static_cast<int>(std::llround(pct)));
    } else {
        std::snprintf(buf, sizeof(buf), "%g%%", pct);
    }
    return buf;
}

void sort_records(std::vector<TrialRecord>& records) {
    std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
        if (a.level != b.level) return a.level < b.level;
        if (a.trial != b.trial) return a.trial < b.trial;
        return a.method < b.method;
    });
}

}  // namespace

TrialRecord execute_trial(const RunConfig& snapshot, const SynthDataset& dataset) {
    const DataMatrix data = make_data_matrix(dataset.x, snapshot.normalize);
    const S3cConfig cfg = snapshot.s3c_config();

    const auto start = std::chrono::steady_clock::now();
    ClusterResult result;
    if (snapshot.method == "ssc") {
        result = run_ssc(data, cfg);
    } else if (snapshot.method == "s3c-hard" || snapshot.method == "s3c-soft") {
        result = run_s3c(data, cfg);
    } else if (snapshot.method == "cs3c-hard" || snapshot.method == "cs3c-soft") {
        const auto constraints = sample_side_info(
            dataset.truth, snapshot.fraction,
            derive_seed(snapshot.seed, {stream::kSideInfo, level_key(snapshot.fraction)}));
        const SideInfoMatrix side = encode_side_info(constraints, data.count());
        result = run_s3c(data, cfg, &side);
    } else {
        throw DataError("unknown method '" + snapshot.method + "'");
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    const EvalReport report =
        evaluate(dataset.truth, result.labels.labels, cfg.n_clusters, result.c_final);
    TrialRecord record;
    record.method = snapshot.method;
    record.level = snapshot.method.rfind("cs3c", 0) == 0 ? snapshot.fraction
                                                         : snapshot.synth_corruption;
    record.seed = snapshot.seed;
    record.err = report.err;
    record.spr = report.spr;
    record.conn = report.conn;
    record.outer_iters = static_cast<int>(result.history.size());
    record.wall_time_s = elapsed.count();
    record.snapshot = snapshot;
    return record;
}

TrialRecord replay_trial(const RunConfig& snapshot) {
    const SynthDataset dataset = generate(snapshot.synth_spec());
    return execute_trial(snapshot, dataset);
}

SweepResult run_table1(const RunConfig& base) {
    if (base.trials < 1) throw DataError("need at least one trial");
    const int n_levels = static_cast<int>(base.levels.size());
    const int n_cells = n_levels * base.trials;
    std::vector<std::vector<TrialRecord>> slots(static_cast<size_t>(n_cells));
    std::vector<std::vector<TrialFailure>> fail_slots(static_cast<size_t>(n_cells));

    run_jobs(base.threads, n_cells, [&](int cell) {
        const int level_idx = cell / base.trials;
        const int trial = cell % base.trials;
        const double level = base.levels[static_cast<size_t>(level_idx)];
        const std::uint64_t dataset_seed = derive_seed(
            base.seed, {stream::kDataset, level_key(level), static_cast<std::uint64_t>(trial)});
        RunConfig snapshot = base;
        snapshot.synth_corruption = level;
        snapshot.seed = dataset_seed;
        const SynthDataset dataset = generate(snapshot.synth_spec());
        for (const std::string& method : base.methods) {
            snapshot.method = method;
            try {
                TrialRecord record = execute_trial(snapshot, dataset);
                record.trial = trial;
                slots[static_cast<size_t>(cell)].push_back(std::move(record));
            } catch (const std::exception& e) {
                fail_slots[static_cast<size_t>(cell)].push_back(
                    {method, level, trial, e.what()});
            }
        }
    });

    SweepResult out;
    for (auto& slot : slots) {
        for (auto& r : slot) out.records.push_back(std::move(r));
    }
    for (auto& slot : fail_slots) {
        for (auto& f : slot) out.failures.push_back(std::move(f));
    }
    sort_records(out.records);
    out.summary = summarize(out.records, base.levels, base.methods);
    return out;
}

SweepResult run_sideinfo_sweep(const RunConfig& base) {
    if (base.trials < 1) throw DataError("need at least one trial");
    const std::vector<std::string> methods = {"cs3c-hard", "cs3c-soft"};
    const int n_cells = base.trials;  // one dataset per trial, shared by all fractions
    std::vector<std::vector<TrialRecord>> slots(static_cast<size_t>(n_cells));
    std::vector<std::vector<TrialFailure>> fail_slots(static_cast<size_t>(n_cells));

    run_jobs(base.threads, n_cells, [&](int trial) {
        const std::uint64_t dataset_seed = derive_seed(
            base.seed, {stream::kDataset, stream::kTrial, static_cast<std::uint64_t>(trial)});
        RunConfig snapshot = base;
        snapshot.seed = dataset_seed;
        const SynthDataset dataset = generate(snapshot.synth_spec());
        for (double fraction : base.fractions) {
            snapshot.fraction = fraction;
            for (const std::string& method : methods) {
                snapshot.method = method;
                try {
                    TrialRecord record = execute_trial(snapshot, dataset);
                    record.trial = trial;
                    slots[static_cast<size_t>(trial)].push_back(std::move(record));
                } catch (const std::exception& e) {
                    fail_slots[static_cast<size_t>(trial)].push_back(
                        {method, fraction, trial, e.what()});
                }
            }
        }
    });

    SweepResult out;
    for (auto& slot : slots) {
        for (auto& r : slot) out.records.push_back(std::move(r));
    }
    for (auto& slot : fail_slots) {
        for (auto& f : slot) out.failures.push_back(std::move(f));
    }
    sort_records(out.records);
    out.summary = summarize(out.records, base.fractions, methods);
    return out;
}

SweepSummary summarize(const std::vector<TrialRecord>& records, const std::vector<double>& levels,
                       const std::vector<std::string>& methods) {
    SweepSummary summary;
    summary.levels = levels;
    summary.methods = methods;
    for (const std::string& method : methods) {
        for (double level : levels) {
            std::vector<double> errs;
            for (const TrialRecord& r : records) {
                if (r.method == method && r.level == level) errs.push_back(r.err);
            }
            CellStats stats;
            stats.count = static_cast<int>(errs.size());
            if (!errs.empty()) {
                double sum = 0.0;
                for (double e : errs) sum += e;
                stats.mean = sum / static_cast<double>(errs.size());
                std::sort(errs.begin(), errs.end());
                const size_t mid = errs.size() / 2;
                stats.median = errs.size() % 2 ? errs[mid] : 0.5 * (errs[mid - 1] + errs[mid]);
                if (errs.size() > 1) {
                    double ss = 0.0;
                    for (double e : errs) ss += (e - stats.mean) * (e - stats.mean);
                    stats.stddev = std::sqrt(ss / static_cast<double>(errs.size() - 1));
                }
            }
            summary.cells[{method, level}] = stats;
        }
    }
    return summary;
}

std::string summary_csv(const SweepSummary& summary) {
    std::string out = "method";
    for (double level : summary.levels) {
        out += ',';
        out += level_label(level);
    }
    out += '\n';
    for (const std::string& method : summary.methods) {
        out += method;
        for (double level : summary.levels) {
            const CellStats& stats = summary.cells.at({method, level});
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", stats.mean * 100.0);
            out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

json record_to_json(const TrialRecord& r) {
    return json{{"method", r.method},   {"level", r.level},
                {"trial", r.trial},     {"seed", r.seed},
                {"err", r.err},         {"spr", r.spr},
                {"conn", r.conn},       {"outer_iters", r.outer_iters},
                {"wall_time_s", r.wall_time_s}, {"config", config_to_json(r.snapshot)}};
}

TrialRecord record_from_json(const json& j) {
    TrialRecord r;
    j.at("method").get_to(r.method);
    j.at("level").get_to(r.level);
    j.at("trial").get_to(r.trial);
    j.at("seed").get_to(r.seed);
    j.at("err").get_to(r.err);
    j.at("spr").get_to(r.spr);
    j.at("conn").get_to(r.conn);
    j.at("outer_iters").get_to(r.outer_iters);
    j.at("wall_time_s").get_to(r.wall_time_s);
    r.snapshot = config_from_json(j.at("config"));
    return r;
}

}  // namespace s3c
