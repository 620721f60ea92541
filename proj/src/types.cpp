#include "s3c/types.hpp"

#include <algorithm>
#include <cmath>

namespace s3c {

DataMatrix make_data_matrix(Matrix values, bool normalize) {
    if (values.rows() < 1 || values.cols() < 2) {
        throw DataError("data matrix must have D >= 1 rows and N >= 2 columns, got " +
                        std::to_string(values.rows()) + "x" + std::to_string(values.cols()));
    }
    if (!values.allFinite()) throw DataError("data matrix contains non-finite entries");
    if (normalize) {
        for (Index j = 0; j < values.cols(); ++j) {
            const double norm = values.col(j).norm();
            if (norm < 1e-300) {
                throw DataError("cannot normalize zero column " + std::to_string(j + 1));
            }
            values.col(j) /= norm;
        }
    }
    return DataMatrix{std::move(values), normalize};
}

Matrix HardSegmentation::indicator() const {
    Matrix q = Matrix::Zero(count(), n);
    for (Index i = 0; i < count(); ++i) q(i, labels[static_cast<size_t>(i)] - 1) = 1.0;
    return q;
}

HardSegmentation make_segmentation(std::vector<int> labels, int n) {
    if (n < 1) throw DataError("cluster count must be >= 1");
    std::vector<Index> sizes(static_cast<size_t>(n), 0);
    for (size_t i = 0; i < labels.size(); ++i) {
        const int lab = labels[i];
        if (lab < 1 || lab > n) {
            throw DataError("label " + std::to_string(lab) + " at point " + std::to_string(i + 1) +
                            " is outside {1.." + std::to_string(n) + "}");
        }
        ++sizes[static_cast<size_t>(lab - 1)];
    }
    for (int k = 0; k < n; ++k) {
        if (sizes[static_cast<size_t>(k)] == 0) {
            throw DataError("cluster " + std::to_string(k + 1) + " is empty");
        }
    }
    return HardSegmentation{std::move(labels), n};
}

AffinityMatrix affinity_from_coefficients(const Matrix& coefficients) {
    Matrix a = 0.5 * (coefficients.cwiseAbs() + coefficients.transpose().cwiseAbs());
    return AffinityMatrix{std::move(a)};
}

StructureMatrix structure_from_hard(const HardSegmentation& seg) {
    const Index n_points = seg.count();
    Matrix theta = Matrix::Zero(n_points, n_points);
    for (Index i = 0; i < n_points; ++i) {
        for (Index j = i + 1; j < n_points; ++j) {
            if (seg.labels[static_cast<size_t>(i)] != seg.labels[static_cast<size_t>(j)]) {
                theta(i, j) = 1.0;
                theta(j, i) = 1.0;
            }
        }
    }
    return StructureMatrix{std::move(theta), StructureKind::hard};
}

StructureMatrix structure_from_soft(const SoftEmbedding& embedding) {
    if (!embedding.rows.allFinite()) throw DataError("embedding contains non-finite entries");
    Matrix q = embedding.rows;
    for (Index i = 0; i < q.rows(); ++i) {
        const double norm = q.row(i).norm();
        if (norm > 0.0) q.row(i) /= norm;
    }
    const Index n_points = q.rows();
    Matrix theta = Matrix::Zero(n_points, n_points);
    for (Index i = 0; i < n_points; ++i) {
        for (Index j = i + 1; j < n_points; ++j) {
            const double v = std::clamp(0.5 * (q.row(i) - q.row(j)).squaredNorm(), 0.0, 2.0);
            theta(i, j) = v;
            theta(j, i) = v;
        }
    }
    return StructureMatrix{std::move(theta), StructureKind::soft};
}

double subspace_structured_norm(const Matrix& coefficients, const StructureMatrix& theta) {
    if (coefficients.rows() != theta.values.rows() || coefficients.cols() != theta.values.cols()) {
        throw DataError("coefficient and structure matrix shapes differ");
    }
    return coefficients.cwiseAbs().cwiseProduct(theta.values).sum();
}

void validate_structure(const StructureMatrix& theta) {
    const Matrix& t = theta.values;
    if (t.rows() != t.cols()) throw DataError("structure matrix is not square");
    for (Index i = 0; i < t.rows(); ++i) {
        if (t(i, i) != 0.0) throw DataError("structure matrix has nonzero diagonal");
        for (Index j = i + 1; j < t.cols(); ++j) {
            if (t(i, j) != t(j, i)) throw DataError("structure matrix is not symmetric");
            const double v = t(i, j);
            if (theta.kind == StructureKind::hard) {
                if (v != 0.0 && v != 1.0) throw DataError("hard structure entry outside {0,1}");
            } else if (v < 0.0 || v > 2.0) {
                throw DataError("soft structure entry outside [0,2]");
            }
        }
    }
}

}  // namespace s3c
