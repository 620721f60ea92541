#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "s3c/bench.hpp"
#include "s3c/io.hpp"
#include "s3c/metrics.hpp"
#include "s3c/pipeline.hpp"
#include "s3c/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool no_normalize = false;
    std::optional<double> alpha;
    std::optional<double> lambda0;
    std::optional<std::string> mode;
    std::optional<std::string> schedule;
    std::optional<double> nu;
    std::optional<int> tmax;
    std::optional<double> eps1, eps2, eps3, eps4;
    std::optional<int> n_clusters;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON run configuration");
    cmd->add_option("--seed", flags.seed, "Base RNG seed");
    cmd->add_option("--threads", flags.threads, "Worker threads for sweeps");
    cmd->add_flag("--no-normalize", flags.no_normalize, "Skip unit-l2 column normalization");
    cmd->add_option("--alpha", flags.alpha, "Structure weight");
    cmd->add_option("--lambda0", flags.lambda0, "Error tradeoff numerator");
    cmd->add_option("--mode", flags.mode, "ssc | s3c-hard | s3c-soft | cs3c-hard | cs3c-soft");
    cmd->add_option("--schedule", flags.schedule, "fixed | grow-alpha | grow-alpha-shrink-l1");
    cmd->add_option("--nu", flags.nu, "Schedule growth factor");
    cmd->add_option("--tmax", flags.tmax, "Maximum outer iterations");
    cmd->add_option("--stop-eps1", flags.eps1, "Relative-Theta-change stop tolerance");
    cmd->add_option("--stop-eps2", flags.eps2, "Relative-C-change stop tolerance");
    cmd->add_option("--stop-eps3", flags.eps3, "Structured-norm-decrease stop tolerance");
    cmd->add_option("--stop-eps4", flags.eps4, "Kmeans-cost-decrease stop tolerance");
    cmd->add_option("--n", flags.n_clusters, "Number of clusters");
}

s3c::RunConfig materialize(const CommonFlags& flags) {
    s3c::RunConfig cfg;
    if (!flags.config_path.empty()) cfg = s3c::load_config(flags.config_path);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;
    if (flags.no_normalize) cfg.normalize = false;
    if (flags.alpha) cfg.alpha = *flags.alpha;
    if (flags.lambda0) cfg.lambda0 = *flags.lambda0;
    if (flags.mode) cfg.method = *flags.mode;
    if (flags.schedule) cfg.schedule = *flags.schedule;
    if (flags.nu) cfg.nu = *flags.nu;
    if (flags.tmax) cfg.t_max = *flags.tmax;
    if (flags.eps1) cfg.stop_eps1 = *flags.eps1;
    if (flags.eps2) cfg.stop_eps2 = *flags.eps2;
    if (flags.eps3) cfg.stop_eps3 = *flags.eps3;
    if (flags.eps4) cfg.stop_eps4 = *flags.eps4;
    if (flags.n_clusters) cfg.n_clusters = *flags.n_clusters;
    return cfg;
}

void write_records_jsonl(const fs::path& path, const std::vector<s3c::TrialRecord>& records) {
    std::ofstream out(path);
    if (!out) throw s3c::DataError("cannot write " + path.string());
    for (const auto& record : records) out << s3c::record_to_json(record).dump() << '\n';
}

void report_failures(const std::vector<s3c::TrialFailure>& failures) {
    for (const auto& f : failures) {
        std::cerr << "trial failed: method=" << f.method << " level=" << f.level
                  << " trial=" << f.trial << ": " << f.message << '\n';
    }
}

int cmd_synth(const CommonFlags& flags, const std::string& out_dir) {
    const s3c::RunConfig cfg = materialize(flags);
    const s3c::SynthDataset dataset = s3c::generate(cfg.synth_spec());
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    s3c::save_table(dir / "X.csv", dataset.x);
    s3c::save_labels(dir / "labels.csv", dataset.truth);
    s3c::save_table(dir / "mask.csv", dataset.corrupted_mask.cast<double>());
    s3c::save_config(dir / "config.json", cfg);
    std::cout << "wrote " << (dir / "X.csv").string() << " (" << dataset.x.rows() << "x"
              << dataset.x.cols() << ")\n";
    return kExitOk;
}

int cmd_cluster(const CommonFlags& flags, const std::string& data_path,
                const std::string& constraints_path, const std::string& truth_path,
                const std::string& out_dir) {
    s3c::RunConfig cfg = materialize(flags);
    const s3c::Matrix raw = s3c::load_table(data_path);
    const s3c::DataMatrix data = s3c::make_data_matrix(raw, cfg.normalize);

    const bool constrained = cfg.method.rfind("cs3c", 0) == 0;
    if (constrained && constraints_path.empty()) {
        std::cerr << "method '" << cfg.method << "' requires --constraints\n";
        return kExitUsage;
    }
    std::optional<s3c::SideInfoMatrix> side;
    if (!constraints_path.empty()) {
        side = s3c::encode_side_info(s3c::load_constraints(constraints_path), data.count());
        if (!constrained) cfg.method = cfg.method == "s3c-soft" ? "cs3c-soft" : "cs3c-hard";
    }

    std::vector<int> truth;
    if (!truth_path.empty()) truth = s3c::load_labels(truth_path);
    if (cfg.n_clusters <= 0) {
        if (truth.empty()) {
            std::cerr << "--n is required when no --truth is given\n";
            return kExitUsage;
        }
        cfg.n_clusters = *std::max_element(truth.begin(), truth.end());
    }

    const s3c::S3cConfig run_cfg = cfg.s3c_config();
    s3c::ClusterResult result;
    if (cfg.method == "ssc") {
        result = s3c::run_ssc(data, run_cfg);
    } else {
        result = s3c::run_s3c(data, run_cfg, side ? &*side : nullptr);
    }

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    s3c::save_labels(dir / "labels.csv", result.labels.labels);
    s3c::save_table(dir / "C.csv", result.c_final);
    std::ofstream(dir / "history.json") << s3c::history_to_json(result).dump(2) << '\n';
    s3c::save_config(dir / "config.json", cfg);
    if (!truth.empty()) {
        const s3c::EvalReport report =
            s3c::evaluate(truth, result.labels.labels, cfg.n_clusters, result.c_final);
        std::ofstream(dir / "metrics.json") << s3c::report_to_json(report).dump(2) << '\n';
        std::cout << s3c::report_to_json(report).dump() << '\n';
    } else {
        std::cout << "stop_reason=" << s3c::to_string(result.stop_reason)
                  << " outer_iters=" << result.history.size() << '\n';
    }
    return kExitOk;
}

int cmd_bench(const CommonFlags& flags, const std::string& kind, const std::string& out_dir) {
    const s3c::RunConfig cfg = materialize(flags);
    const s3c::SweepResult sweep =
        kind == "table1" ? s3c::run_table1(cfg) : s3c::run_sideinfo_sweep(cfg);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_records_jsonl(dir / "records.jsonl", sweep.records);
    const std::string csv = s3c::summary_csv(sweep.summary);
    std::ofstream(dir / "summary.csv") << csv;
    s3c::save_config(dir / "config.json", cfg);
    report_failures(sweep.failures);
    std::cout << csv;
    return sweep.failures.empty() ? kExitOk : kExitNumerical;
}

int cmd_eval(const std::string& truth_path, const std::string& pred_path,
             const std::string& coeffs_path) {
    const std::vector<int> truth = s3c::load_labels(truth_path);
    const std::vector<int> pred = s3c::load_labels(pred_path);
    const int n = std::max(*std::max_element(truth.begin(), truth.end()),
                           *std::max_element(pred.begin(), pred.end()));
    json out;
    out["err"] = s3c::clustering_error(truth, pred, n);
    if (!coeffs_path.empty()) {
        const s3c::Matrix coeffs = s3c::load_table(coeffs_path);
        int zero_columns = 0;
        out["spr"] = s3c::subspace_preserving_rate(coeffs, truth, &zero_columns);
        out["spr_zero_columns"] = zero_columns;
        const auto [conn, per_class] =
            s3c::connectivity(s3c::affinity_from_coefficients(coeffs), truth);
        out["conn"] = conn;
        out["per_class_conn"] = per_class;
    }
    std::cout << out.dump() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured sparse subspace clustering"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string out_dir = "out";
    std::string data_path, constraints_path, truth_path, pred_path, coeffs_path;

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic union-of-subspaces dataset");
    add_common_flags(synth, flags);
    synth->add_option("--out", out_dir, "Output directory");

    CLI::App* cluster = app.add_subcommand("cluster", "Cluster a data matrix");
    add_common_flags(cluster, flags);
    cluster->add_option("--data", data_path, "CSV/TSV matrix, rows = features")->required();
    cluster->add_option("--constraints", constraints_path, "Pairwise constraint file");
    cluster->add_option("--truth", truth_path, "Ground-truth labels for metrics");
    cluster->add_option("--out", out_dir, "Output directory");

    CLI::App* bench = app.add_subcommand("bench", "Run a benchmark sweep");
    CLI::App* table1 = bench->add_subcommand("table1", "Corruption sweep");
    add_common_flags(table1, flags);
    table1->add_option("--out", out_dir, "Output directory");
    CLI::App* sideinfo = bench->add_subcommand("sideinfo", "Side-information sweep");
    add_common_flags(sideinfo, flags);
    sideinfo->add_option("--out", out_dir, "Output directory");
    bench->require_subcommand(1);

    CLI::App* eval = app.add_subcommand("eval", "Score predicted labels");
    eval->add_option("--truth", truth_path, "Ground-truth labels")->required();
    eval->add_option("--pred", pred_path, "Predicted labels")->required();
    eval->add_option("--coeffs", coeffs_path, "Coefficient matrix for SPR/CONN");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (synth->parsed()) return cmd_synth(flags, out_dir);
        if (cluster->parsed()) {
            return cmd_cluster(flags, data_path, constraints_path, truth_path, out_dir);
        }
        if (bench->parsed()) {
            return cmd_bench(flags, table1->parsed() ? "table1" : "sideinfo", out_dir);
        }
        if (eval->parsed()) return cmd_eval(truth_path, pred_path, coeffs_path);
    } catch (const s3c::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const s3c::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
