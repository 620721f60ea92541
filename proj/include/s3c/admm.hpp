#pragma once

#include <Eigen/Cholesky>
#include <optional>

#include "s3c/types.hpp"

namespace s3c {

enum class NoiseModel { l1, frobenius };

struct AdmmParams {
    double lambda = 1.0;     // error tradeoff, > 0
    double alpha_eff = 0.0;  // effective structure weight (schedule-adjusted)
    double w1 = 1.0;         // effective l1 weight (schedule-adjusted)
    double rho = 1.1;        // mu growth factor, > 1
    double mu0 = 1.0;        // initial mu, > 0
    double eps = 1e-6;       // residual tolerance
    int max_iters = 200;
    NoiseModel noise = NoiseModel::l1;
};

/// Primal/dual iterates. Used to carry warm starts between outer iterations:
/// C, A, E are reused, multipliers and mu are reset.
struct AdmmState {
    Matrix C, A, E;
    Matrix Y, Z;
    double mu = 0.0;
    int iter = 0;
};

struct AdmmResult {
    Matrix C, E;
    int iterations_used = 0;
    double final_residual = 0.0;
    bool converged = false;
};

/// min_j max_{i != j} x_i' x_j over columns; the denominator for both
/// lambda = lambda0 / scale and mu0 = 1 / scale. Throws NumericalError when
/// the value is <= 0 (some column non-positively correlated with all others).
double compute_scale(const DataMatrix& data);

/// Entrywise shrink of U at threshold (w1 * Psi_ij + alpha_eff * Theta_ij) / mu,
/// then the diagonal is zeroed.
Matrix update_coefficients(const Matrix& u, const Matrix& theta, const Matrix& psi, double mu,
                           double w1, double alpha_eff);

/// Solves (X'X + I) A = X'(X - E - Y/mu) + C - Z/mu with the cached factor.
Matrix update_auxiliary(const DataMatrix& data, const Matrix& error, const Matrix& coefficients,
                        const Matrix& y, const Matrix& z, double mu,
                        const Eigen::LLT<Matrix>& gram_factor);

/// Prox of the noise term at V: entrywise shrink at lambda/mu (l1) or
/// V * mu / (mu + lambda) (frobenius).
Matrix update_error(const Matrix& v, double lambda, double mu, NoiseModel noise);

/// ADMM for the subspace structured sparse representation problem. The
/// Cholesky factor of X'X + I is computed once per instance and shared by
/// every solve (X never changes).
class AdmmSolver {
public:
    explicit AdmmSolver(DataMatrix data);

    /// One full ADMM run. theta/psi may be null for the plain-SSC case
    /// (theta = 0, psi = 1). A warm start reuses (C, A, E) and resets the
    /// multipliers and mu. Throws NumericalError on divergence.
    AdmmResult solve(const Matrix* theta, const Matrix* psi, const AdmmParams& params,
                     const AdmmState* warm = nullptr);

    /// Final iterates of the last solve, for warm-starting the next one.
    const AdmmState& last_state() const { return state_; }

    const DataMatrix& data() const { return data_; }

private:
    DataMatrix data_;
    Eigen::LLT<Matrix> gram_factor_;
    AdmmState state_;
};

}  // namespace s3c
