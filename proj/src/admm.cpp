#include "s3c/admm.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace s3c {

double compute_scale(const DataMatrix& data) {
    const Matrix& x = data.values;
    if (x.cols() < 2) throw DataError("scale needs at least two columns");
    const Matrix gram = x.transpose() * x;
    double scale = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < gram.cols(); ++j) {
        double col_max = -std::numeric_limits<double>::infinity();
        for (Index i = 0; i < gram.rows(); ++i) {
            if (i != j) col_max = std::max(col_max, gram(i, j));
        }
        scale = std::min(scale, col_max);
    }
    if (!(scale > 0.0)) {
        throw NumericalError("degenerate scale: min-max column inner product is " +
                             std::to_string(scale));
    }
    return scale;
}

Matrix update_coefficients(const Matrix& u, const Matrix& theta, const Matrix& psi, double mu,
                           double w1, double alpha_eff) {
    const Index n = u.rows();
    Matrix c(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            c(i, j) = shrink(u(i, j), (w1 * psi(i, j) + alpha_eff * theta(i, j)) / mu);
        }
    }
    c.diagonal().setZero();
    return c;
}

Matrix update_auxiliary(const DataMatrix& data, const Matrix& error, const Matrix& coefficients,
                        const Matrix& y, const Matrix& z, double mu,
                        const Eigen::LLT<Matrix>& gram_factor) {
    const Matrix& x = data.values;
    const Matrix rhs =
        x.transpose() * (x - error - y / mu) + coefficients - z / mu;
    return gram_factor.solve(rhs);
}

Matrix update_error(const Matrix& v, double lambda, double mu, NoiseModel noise) {
    if (noise == NoiseModel::frobenius) return v * (mu / (mu + lambda));
    const double tau = lambda / mu;
    return v.unaryExpr([tau](double x) { return shrink(x, tau); });
}

AdmmSolver::AdmmSolver(DataMatrix data) : data_(std::move(data)) {
    Matrix gram = data_.values.transpose() * data_.values;
    gram.diagonal().array() += 1.0;
    gram_factor_.compute(gram);
    if (gram_factor_.info() != Eigen::Success) {
        throw NumericalError("Cholesky factorization of X'X + I failed");
    }
}

AdmmResult AdmmSolver::solve(const Matrix* theta, const Matrix* psi, const AdmmParams& params,
                             const AdmmState* warm) {
    if (params.lambda <= 0.0 || params.mu0 <= 0.0 || params.rho <= 1.0 || params.eps <= 0.0 ||
        params.max_iters < 1) {
        throw DataError("invalid ADMM parameters");
    }
    const Matrix& x = data_.values;
    const Index n = x.cols();
    const Matrix theta_mat = theta ? *theta : Matrix::Zero(n, n);
    const Matrix psi_mat = psi ? *psi : Matrix::Ones(n, n);
    if (theta_mat.rows() != n || theta_mat.cols() != n || psi_mat.rows() != n ||
        psi_mat.cols() != n) {
        throw DataError("theta/psi shape does not match the data");
    }

    AdmmState s;
    if (warm) {
        s.C = warm->C;
        s.A = warm->A;
        s.E = warm->E;
    } else {
        s.C = Matrix::Zero(n, n);
        s.A = Matrix::Zero(n, n);
        s.E = Matrix::Zero(x.rows(), n);
    }
    s.Y = Matrix::Zero(x.rows(), n);
    s.Z = Matrix::Zero(n, n);
    s.mu = params.mu0;

    AdmmResult result;
    result.final_residual = std::numeric_limits<double>::infinity();
    for (int t = 0; t < params.max_iters; ++t) {
        const Matrix u = s.A + s.Z / s.mu;
        s.C = update_coefficients(u, theta_mat, psi_mat, s.mu, params.w1, params.alpha_eff);
        s.A = update_auxiliary(data_, s.E, s.C, s.Y, s.Z, s.mu, gram_factor_);
        const Matrix xa = x * s.A;
        s.E = update_error(x - xa + s.Y / s.mu, params.lambda, s.mu, params.noise);

        const Matrix r_data = x - xa - s.E;
        const Matrix r_split = s.A - s.C;
        s.Y += s.mu * r_data;
        s.Z += s.mu * r_split;
        if (!s.C.allFinite() || !s.A.allFinite() || !s.E.allFinite()) {
            throw NumericalError("divergence at iteration " + std::to_string(t + 1));
        }
        const double res = std::max(r_data.lpNorm<Eigen::Infinity>(),
                                    r_split.lpNorm<Eigen::Infinity>());
        s.mu *= params.rho;
        s.iter = t + 1;
        result.iterations_used = t + 1;
        result.final_residual = res;
        if (res < params.eps) {
            result.converged = true;
            break;
        }
    }

    result.C = s.C;
    result.E = s.E;
    state_ = std::move(s);
    return result;
}

}  // namespace s3c
