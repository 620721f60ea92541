#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "s3c/metrics.hpp"
#include "s3c/pipeline.hpp"
#include "s3c/synth.hpp"
#include "s3c/types.hpp"

namespace s3c {

enum class TableFormat { csv, tsv };

/// Rows = features, columns = points. Throws DataError with line/column
/// diagnostics on ragged rows, non-numeric cells, or an empty file.
Matrix load_table(const std::filesystem::path& path, TableFormat format);
/// Format chosen from the extension (.tsv -> tabs, anything else -> commas).
Matrix load_table(const std::filesystem::path& path);

/// 17 significant digits, so save -> load is an identity in practice.
void save_table(const std::filesystem::path& path, const Matrix& values, TableFormat format);
void save_table(const std::filesystem::path& path, const Matrix& values);

/// One 1-based integer label per line.
std::vector<int> load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Lines of the form "i,j,must" or "i,j,cannot" with 1-based indices.
/// Validates ranges and rejects duplicated unordered pairs.
std::vector<Constraint> load_constraints(const std::filesystem::path& path);
void save_constraints(const std::filesystem::path& path, const std::vector<Constraint>& constraints);

/// The flat key-value run configuration: clustering, synthesis, and bench
/// options in one document. Unknown keys are rejected; serialization always
/// materializes every key.
struct RunConfig {
    std::string method = "s3c-hard";
    double lambda0 = 20.0;
    std::optional<double> alpha;
    std::string schedule = "grow-alpha-shrink-l1";
    double nu = 1.2;
    int t_max = 10;
    std::optional<double> stop_eps1 = 1e-3;
    std::optional<double> stop_eps2;
    std::optional<double> stop_eps3;
    std::optional<double> stop_eps4;
    int n_clusters = 0;  // 0: use the synthetic subspace count
    std::uint64_t seed = 1;
    int kmeans_restarts = 20;
    double rho = 1.1;
    double admm_eps = 1e-6;
    int admm_max_iters = 200;
    std::string noise = "l1";
    bool normalize = true;
    int synth_ambient_dim = 100;
    int synth_subspace_dim = 5;
    int synth_subspaces = 15;
    int synth_points_per = 10;
    double synth_corruption = 0.0;
    double synth_noise_factor = 0.3;
    double fraction = 0.0;  // side-information fraction for constrained runs
    int trials = 20;
    std::vector<double> levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> fractions = {0.0, 0.05, 0.10, 0.15};
    std::vector<std::string> methods = {"ssc", "s3c-hard", "s3c-soft"};
    int threads = 1;

    S3cConfig s3c_config() const;  // mode/alpha resolved from `method`
    SynthSpec synth_spec() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& config);

/// FNV-1a over the matrix bytes in column-major order, as a hex string.
std::string matrix_digest(const Matrix& values);

nlohmann::json history_to_json(const ClusterResult& result);
nlohmann::json report_to_json(const EvalReport& report);

}  // namespace s3c
