#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "s3c/admm.hpp"
#include "s3c/types.hpp"

namespace s3c {

enum class ThetaMode { hard, soft };
enum class Schedule { fixed, grow_alpha, grow_alpha_shrink_l1 };

/// Outer-loop stopping tolerances; an unset optional disables that rule.
/// The defaults enable only the relative-change-of-Theta rule.
struct StopRules {
    std::optional<double> theta_eps = 1e-3;   // relative change of Theta
    std::optional<double> c_eps;              // relative change of C
    std::optional<double> norm_eps;           // decrease of the structured norm
    std::optional<double> kmeans_eps;         // decrease of the k-means cost
};

struct S3cConfig {
    ThetaMode mode = ThetaMode::hard;
    double lambda0 = 20.0;
    std::optional<double> alpha;  // defaults to 0.1 (hard) / 1.0 (soft)
    Schedule schedule = Schedule::grow_alpha_shrink_l1;
    double nu = 1.2;
    int t_max = 10;
    StopRules stop;
    int n_clusters = 2;
    std::uint64_t seed = 1;
    int kmeans_restarts = 20;
    // ADMM settings; lambda and mu0 are derived from the data scale at run
    // time, the rest is taken from here.
    double rho = 1.1;
    double admm_eps = 1e-6;
    int admm_max_iters = 200;
    NoiseModel noise = NoiseModel::l1;

    double effective_alpha() const {
        return alpha.value_or(mode == ThetaMode::hard ? 0.1 : 1.0);
    }
};

enum class StopReason { theta_converged, c_converged, norm_converged, kmeans_converged, max_iters };

const char* to_string(StopReason reason);

/// One outer iteration's bookkeeping. Relative changes are absent at T = 1.
struct IterationRecord {
    int t = 0;
    Matrix coefficients;  // C after the ADMM solve
    Matrix theta;         // structure matrix built from this iteration's clustering
    double structured_norm = 0.0;
    double kmeans_cost = 0.0;
    int admm_iters = 0;
    std::optional<double> rel_change_theta;
    std::optional<double> rel_change_c;
};

struct ClusterResult {
    HardSegmentation labels;
    Matrix c_final, e_final;
    std::vector<IterationRecord> history;
    StopReason stop_reason = StopReason::max_iters;
};

/// Numerical failure inside the driver; carries the iterations completed
/// before the failure.
struct PipelineError : NumericalError {
    PipelineError(const std::string& message, std::vector<IterationRecord> history)
        : NumericalError(message), partial_history(std::move(history)) {}
    std::vector<IterationRecord> partial_history;
};

/// Schedule weights at outer iteration T >= 1: the effective l1 weight and
/// structure weight (w1, alpha_eff).
std::pair<double, double> schedule_weights(Schedule schedule, double alpha, double nu, int t);

/// Plain SSC: one ADMM solve with Theta = 0, Psi = 1, then one spectral
/// clustering pass.
ClusterResult run_ssc(const DataMatrix& data, const S3cConfig& config);

/// The alternating driver: ADMM solve -> spectral clustering -> structure
/// feedback, warm-starting each solve from the previous one, until a stop
/// rule fires or t_max is reached. With `side` present this is the
/// constrained variant (Psi weighting from T = 1 onward).
ClusterResult run_s3c(const DataMatrix& data, const S3cConfig& config,
                      const SideInfoMatrix* side = nullptr);

/// Builds the Psi weight matrix from pairwise constraints. Throws DataError
/// on out-of-range indices or a duplicated pair.
SideInfoMatrix encode_side_info(const std::vector<Constraint>& constraints, Index n_points);

}  // namespace s3c
