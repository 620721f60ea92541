#pragma once

#include <vector>

#include "s3c/types.hpp"

namespace s3c {

struct EvalReport {
    double err = 0.0;
    double spr = 0.0;
    double conn = 0.0;
    std::vector<double> per_class_conn;
    int zero_columns = 0;  // columns of C with zero l1 norm (counted as preserving)
};

/// Clustering error: 1 - best-permutation accuracy, solved as a maximum
/// weight assignment on the n x n confusion matrix.
double clustering_error(const std::vector<int>& truth, const std::vector<int>& pred, int n);

/// Exhaustive n! oracle for clustering_error. Rejects n > 8.
double clustering_error_bruteforce(const std::vector<int>& truth, const std::vector<int>& pred,
                                   int n);

/// Mean per-column fraction of l1 coefficient mass inside the true class.
/// Zero columns count as 1; their number is reported via zero_columns.
double subspace_preserving_rate(const Matrix& coefficients, const std::vector<int>& truth,
                                int* zero_columns = nullptr);

/// Per-class second-smallest eigenvalue of I - D^{-1/2} A D^{-1/2} on the
/// induced subgraph, and the mean over classes. Singleton classes score 0.
std::pair<double, std::vector<double>> connectivity(const AffinityMatrix& affinity,
                                                    const std::vector<int>& truth);

/// ERR + SPR + CONN in one report.
EvalReport evaluate(const std::vector<int>& truth, const std::vector<int>& pred, int n,
                    const Matrix& coefficients);

}  // namespace s3c
