#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace s3c {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Malformed or inconsistent input (files, labels, shapes, constraints).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown: divergence, degenerate scale, eigensolver failure.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// D x N matrix of column data points.
struct DataMatrix {
    Matrix values;
    bool column_normalized = false;

    Index dim() const { return values.rows(); }
    Index count() const { return values.cols(); }
};

/// Validates and optionally normalizes columns to unit l2 norm.
/// Throws DataError on non-finite entries, D < 1, N < 2, or a zero column
/// when normalization is requested.
DataMatrix make_data_matrix(Matrix values, bool normalize = true);

/// Cluster assignment: labels[i] in {1..n}, every cluster nonempty.
struct HardSegmentation {
    std::vector<int> labels;
    int n = 0;

    Index count() const { return static_cast<Index>(labels.size()); }
    /// N x n binary indicator matrix (one 1 per row).
    Matrix indicator() const;
};

HardSegmentation make_segmentation(std::vector<int> labels, int n);

/// N x n real matrix of spectral embedding rows (one per point).
struct SoftEmbedding {
    Matrix rows;
};

enum class StructureKind { hard, soft };

/// Pairwise segmentation-disagreement matrix: half the squared distance
/// between indicator (or normalized embedding) rows. Symmetric, zero
/// diagonal; hard entries in {0,1}, soft entries in [0,2].
struct StructureMatrix {
    Matrix values;
    StructureKind kind = StructureKind::hard;
};

enum class LinkType { must_link, cannot_link };

/// Pairwise constraint between points i and j (1-based, i != j).
struct Constraint {
    int i = 0;
    int j = 0;
    LinkType type = LinkType::must_link;
};

/// Positive weight matrix for the constrained l1 term: exp(-1) on must-link
/// pairs, exp(+1) on cannot-link pairs, 1 elsewhere.
struct SideInfoMatrix {
    Matrix values;
    std::vector<Constraint> constraints;
};

struct AffinityMatrix {
    Matrix values;
};

/// Soft-thresholding: sign(x) * max(|x| - tau, 0), the prox of tau*|.|.
inline double shrink(double x, double tau) {
    if (x > tau) return x - tau;
    if (x < -tau) return x + tau;
    return 0.0;
}

/// A = (|C| + |C^T|) / 2.
AffinityMatrix affinity_from_coefficients(const Matrix& coefficients);

/// Binary structure matrix: 0 where labels agree, 1 elsewhere.
StructureMatrix structure_from_hard(const HardSegmentation& seg);

/// Soft structure matrix from embedding rows after unit-l2 row
/// normalization; zero rows are left zero.
StructureMatrix structure_from_soft(const SoftEmbedding& embedding);

/// sum_ij |C_ij| * Theta_ij.
double subspace_structured_norm(const Matrix& coefficients, const StructureMatrix& theta);

/// Throws DataError unless theta is symmetric with zero diagonal and its
/// entries are in the range of its kind.
void validate_structure(const StructureMatrix& theta);

}  // namespace s3c
