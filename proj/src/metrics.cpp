#include "s3c/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace s3c {

namespace {

constexpr double kDegreeFloor = 1e-12;

Matrix confusion(const std::vector<int>& truth, const std::vector<int>& pred, int n) {
    if (truth.size() != pred.size()) throw DataError("label vectors have different lengths");
    Matrix w = Matrix::Zero(n, n);
    for (size_t i = 0; i < truth.size(); ++i) {
        const int a = truth[i];
        const int b = pred[i];
        if (a < 1 || a > n || b < 1 || b > n) {
            throw DataError("label outside {1.." + std::to_string(n) + "} at point " +
                            std::to_string(i + 1));
        }
        w(a - 1, b - 1) += 1.0;
    }
    return w;
}

/// Minimum cost assignment via the O(n^3) Hungarian algorithm with
/// potentials. cost is n x n; returns the assigned column of each row.
std::vector<int> hungarian_min(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<size_t>(n) + 1, 0);  // column -> row, 1-based
    std::vector<int> way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = match[static_cast<size_t>(j0)];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] -
                                   v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j) row_to_col[static_cast<size_t>(match[static_cast<size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

/// lambda_2 of the symmetric normalized Laplacian of one class subgraph.
double fiedler_value(const Matrix& sub) {
    const Index m = sub.rows();
    Vector degrees = sub.colwise().sum();
    for (Index i = 0; i < m; ++i) degrees(i) = std::max(degrees(i), kDegreeFloor);
    const Vector dinv_sqrt = degrees.cwiseSqrt().cwiseInverse();
    const Matrix l_sym =
        Matrix::Identity(m, m) - dinv_sqrt.asDiagonal() * sub * dinv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(l_sym, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failure");
    return eig.eigenvalues()(1);
}

}  // namespace

double clustering_error(const std::vector<int>& truth, const std::vector<int>& pred, int n) {
    if (truth.empty()) throw DataError("empty label vector");
    const Matrix w = confusion(truth, pred, n);
    const std::vector<int> assignment = hungarian_min(-w);
    double correct = 0.0;
    for (int a = 0; a < n; ++a) correct += w(a, assignment[static_cast<size_t>(a)]);
    return 1.0 - correct / static_cast<double>(truth.size());
}

double clustering_error_bruteforce(const std::vector<int>& truth, const std::vector<int>& pred,
                                   int n) {
    if (n > 8) throw DataError("brute-force error requires n <= 8");
    const Matrix w = confusion(truth, pred, n);
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        double correct = 0.0;
        for (int a = 0; a < n; ++a) correct += w(a, perm[static_cast<size_t>(a)]);
        best = std::max(best, correct);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 1.0 - best / static_cast<double>(truth.size());
}

double subspace_preserving_rate(const Matrix& coefficients, const std::vector<int>& truth,
                                int* zero_columns) {
    const Index n_points = coefficients.cols();
    if (static_cast<Index>(truth.size()) != n_points) {
        throw DataError("truth length does not match coefficient matrix");
    }
    int zeros = 0;
    double total = 0.0;
    for (Index j = 0; j < n_points; ++j) {
        const double col_norm = coefficients.col(j).cwiseAbs().sum();
        if (col_norm == 0.0) {
            ++zeros;
            total += 1.0;
            continue;
        }
        double in_class = 0.0;
        for (Index i = 0; i < n_points; ++i) {
            if (truth[static_cast<size_t>(i)] == truth[static_cast<size_t>(j)]) {
                in_class += std::abs(coefficients(i, j));
            }
        }
        total += in_class / col_norm;
    }
    if (zero_columns) *zero_columns = zeros;
    return total / static_cast<double>(n_points);
}

std::pair<double, std::vector<double>> connectivity(const AffinityMatrix& affinity,
                                                    const std::vector<int>& truth) {
    const Matrix& a = affinity.values;
    if (static_cast<Index>(truth.size()) != a.rows()) {
        throw DataError("truth length does not match affinity matrix");
    }
    const int n = *std::max_element(truth.begin(), truth.end());
    std::vector<double> per_class;
    per_class.reserve(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) {
        std::vector<Index> members;
        for (Index i = 0; i < a.rows(); ++i) {
            if (truth[static_cast<size_t>(i)] == k) members.push_back(i);
        }
        const Index m = static_cast<Index>(members.size());
        if (m <= 1) {
            per_class.push_back(0.0);
            continue;
        }
        Matrix sub(m, m);
        for (Index r = 0; r < m; ++r) {
            for (Index c = 0; c < m; ++c) {
                sub(r, c) = a(members[static_cast<size_t>(r)], members[static_cast<size_t>(c)]);
            }
        }
        per_class.push_back(fiedler_value(sub));
    }
    const double mean =
        std::accumulate(per_class.begin(), per_class.end(), 0.0) / static_cast<double>(n);
    return {mean, per_class};
}

EvalReport evaluate(const std::vector<int>& truth, const std::vector<int>& pred, int n,
                    const Matrix& coefficients) {
    EvalReport report;
    report.err = clustering_error(truth, pred, n);
    report.spr = subspace_preserving_rate(coefficients, truth, &report.zero_columns);
    auto [conn, per_class] = connectivity(affinity_from_coefficients(coefficients), truth);
    report.conn = conn;
    report.per_class_conn = std::move(per_class);
    return report;
}

}  // namespace s3c
