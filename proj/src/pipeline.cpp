#include "s3c/pipeline.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "s3c/rng.hpp"
#include "s3c/spectral.hpp"

namespace s3c {

namespace {

double elementwise_l1(const Matrix& m) { return m.cwiseAbs().sum(); }

/// ||prev - cur||_1 / ||prev||_1 with a zero-denominator guard.
double relative_change(const Matrix& prev, const Matrix& cur) {
    const double denom = elementwise_l1(prev);
    const double num = elementwise_l1(prev - cur);
    if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / denom;
}

AdmmParams admm_params_for(const S3cConfig& config, double scale, double w1, double alpha_eff) {
    AdmmParams p;
    p.lambda = config.lambda0 / scale;
    p.mu0 = 1.0 / scale;
    p.rho = config.rho;
    p.eps = config.admm_eps;
    p.max_iters = config.admm_max_iters;
    p.noise = config.noise;
    p.w1 = w1;
    p.alpha_eff = alpha_eff;
    return p;
}

std::uint64_t kmeans_seed(const S3cConfig& config, int t) {
    return derive_seed(config.seed, {stream::kKmeans, static_cast<std::uint64_t>(t)});
}

}  // namespace

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::theta_converged: return "theta_converged";
        case StopReason::c_converged: return "c_converged";
        case StopReason::norm_converged: return "norm_converged";
        case StopReason::kmeans_converged: return "kmeans_converged";
        case StopReason::max_iters: return "max_iters";
    }
    return "unknown";
}

std::pair<double, double> schedule_weights(Schedule schedule, double alpha, double nu, int t) {
    if (t < 1) throw DataError("iteration index must be >= 1");
    switch (schedule) {
        case Schedule::fixed:
            return {1.0, alpha};
        case Schedule::grow_alpha:
            return {1.0, alpha * std::pow(nu, t - 1)};
        case Schedule::grow_alpha_shrink_l1:
            return {std::pow(nu, 1 - t), alpha * std::pow(nu, t - 1)};
    }
    throw DataError("unknown schedule");
}

ClusterResult run_ssc(const DataMatrix& data, const S3cConfig& config) {
    S3cConfig ssc = config;
    ssc.t_max = 1;
    ssc.mode = ThetaMode::hard;
    ssc.alpha = 0.0;
    return run_s3c(data, ssc, nullptr);
}

ClusterResult run_s3c(const DataMatrix& data, const S3cConfig& config, const SideInfoMatrix* side) {
    if (config.n_clusters < 2) throw DataError("need at least two clusters");
    if (config.t_max < 1 || config.nu <= 1.0) throw DataError("invalid s3c configuration");
    const Index n_points = data.count();
    if (side && (side->values.rows() != n_points || side->values.cols() != n_points)) {
        throw DataError("side information shape does not match the data");
    }

    const double scale = compute_scale(data);
    const double alpha = config.effective_alpha();
    const Matrix psi = side ? side->values : Matrix::Ones(n_points, n_points);

    AdmmSolver solver(data);
    ClusterResult result;
    Matrix theta = Matrix::Zero(n_points, n_points);  // T = 1 runs as plain SSC
    AdmmState warm;
    bool have_warm = false;

    for (int t = 1; t <= config.t_max; ++t) {
        const auto [w1, alpha_eff] = schedule_weights(config.schedule, alpha, config.nu, t);
        const AdmmParams params = admm_params_for(config, scale, w1, alpha_eff);
        AdmmResult admm;
        ClusterOutput clustering;
        try {
            admm = solver.solve(&theta, &psi, params, have_warm ? &warm : nullptr);
            clustering = cluster(admm.C, config.n_clusters, config.kmeans_restarts,
                                 kmeans_seed(config, t));
        } catch (const NumericalError& e) {
            throw PipelineError(std::string(e.what()) + " (outer iteration " + std::to_string(t) +
                                    ")",
                                std::move(result.history));
        }
        warm = solver.last_state();
        have_warm = true;

        if (clustering.degenerate_affinity) {
            throw PipelineError("all-zero affinity at outer iteration " + std::to_string(t) +
                                    "; cannot feed back a structure matrix",
                                std::move(result.history));
        }
        StructureMatrix next_theta =
            config.mode == ThetaMode::hard
                ? structure_from_hard(clustering.labels)
                : structure_from_soft(clustering.embedding);
        validate_structure(next_theta);

        IterationRecord record;
        record.t = t;
        record.coefficients = admm.C;
        record.theta = next_theta.values;
        record.structured_norm = subspace_structured_norm(admm.C, next_theta);
        record.kmeans_cost = clustering.kmeans_cost;
        record.admm_iters = admm.iterations_used;
        if (t > 1) {
            const IterationRecord& prev = result.history.back();
            record.rel_change_theta = relative_change(prev.theta, next_theta.values);
            record.rel_change_c = relative_change(prev.coefficients, admm.C);
        }

        result.labels = std::move(clustering.labels);
        result.c_final = admm.C;
        result.e_final = admm.E;
        result.history.push_back(std::move(record));

        if (t > 1) {
            const IterationRecord& cur = result.history.back();
            const IterationRecord& prev = result.history[result.history.size() - 2];
            if (config.stop.theta_eps && *cur.rel_change_theta < *config.stop.theta_eps) {
                result.stop_reason = StopReason::theta_converged;
                return result;
            }
            if (config.stop.c_eps && *cur.rel_change_c < *config.stop.c_eps) {
                result.stop_reason = StopReason::c_converged;
                return result;
            }
            if (config.stop.norm_eps &&
                prev.structured_norm - cur.structured_norm < *config.stop.norm_eps) {
                result.stop_reason = StopReason::norm_converged;
                return result;
            }
            if (config.stop.kmeans_eps &&
                prev.kmeans_cost - cur.kmeans_cost < *config.stop.kmeans_eps) {
                result.stop_reason = StopReason::kmeans_converged;
                return result;
            }
        }
        theta = result.history.back().theta;
    }
    result.stop_reason = StopReason::max_iters;
    return result;
}

SideInfoMatrix encode_side_info(const std::vector<Constraint>& constraints, Index n_points) {
    SideInfoMatrix side;
    side.values = Matrix::Ones(n_points, n_points);
    std::vector<char> seen(static_cast<size_t>(n_points * n_points), 0);
    for (const Constraint& c : constraints) {
        if (c.i < 1 || c.j < 1 || c.i > n_points || c.j > n_points) {
            throw DataError("constraint index (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                            ") out of range 1.." + std::to_string(n_points));
        }
        if (c.i == c.j) throw DataError("constraint pairs a point with itself");
        const Index lo = std::min(c.i, c.j) - 1;
        const Index hi = std::max(c.i, c.j) - 1;
        if (seen[static_cast<size_t>(lo * n_points + hi)]) {
            throw DataError("inconsistent side information: pair (" + std::to_string(c.i) + "," +
                            std::to_string(c.j) + ") appears more than once");
        }
        seen[static_cast<size_t>(lo * n_points + hi)] = 1;
        const double w = c.type == LinkType::must_link ? std::exp(-1.0) : std::exp(1.0);
        side.values(c.i - 1, c.j - 1) = w;
        side.values(c.j - 1, c.i - 1) = w;
    }
    side.constraints = constraints;
    return side;
}

}  // namespace s3c
