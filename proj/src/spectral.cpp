#include "s3c/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "s3c/rng.hpp"

namespace s3c {

namespace {

constexpr double kDegreeFloor = 1e-12;
constexpr int kMaxLloydIters = 300;
constexpr double kCentroidTol = 1e-9;
constexpr int kMaxReseedAttempts = 8;

struct LloydOutcome {
    std::vector<int> assignment;  // 0-based cluster per point
    double cost = 0.0;
    bool empty_cluster = false;
};

Matrix kmeans_pp_seed(const Matrix& points, int k, Rng& rng) {
    const Index n_points = points.rows();
    Matrix centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n_points))));
    Vector dist2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Index pick;
        if (total > 0.0) {
            // sample proportional to squared distance
            double target = rng.uniform() * total;
            pick = -1;
            for (Index i = 0; i < n_points; ++i) {
                if (dist2(i) <= 0.0) continue;
                pick = i;
                target -= dist2(i);
                if (target < 0.0) break;
            }
        } else {
            // all remaining points coincide with chosen centroids
            pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n_points)));
        }
        centroids.row(c) = points.row(pick);
        dist2 = dist2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
    return centroids;
}

LloydOutcome lloyd(const Matrix& points, int k, Matrix centroids) {
    const Index n_points = points.rows();
    LloydOutcome out;
    out.assignment.assign(static_cast<size_t>(n_points), 0);
    for (int iter = 0; iter < kMaxLloydIters; ++iter) {
        // assignment step, ties to the lowest centroid index
        out.cost = 0.0;
        for (Index i = 0; i < n_points; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                const double d = (points.row(i) - centroids.row(c)).squaredNorm();
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            out.assignment[static_cast<size_t>(i)] = best_c;
            out.cost += best;
        }
        // update step
        Matrix next = Matrix::Zero(k, points.cols());
        std::vector<Index> counts(static_cast<size_t>(k), 0);
        for (Index i = 0; i < n_points; ++i) {
            next.row(out.assignment[static_cast<size_t>(i)]) += points.row(i);
            ++counts[static_cast<size_t>(out.assignment[static_cast<size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] == 0) {
                out.empty_cluster = true;
                return out;
            }
            next.row(c) /= static_cast<double>(counts[static_cast<size_t>(c)]);
        }
        const double shift = (next - centroids).rowwise().norm().maxCoeff();
        centroids = std::move(next);
        if (shift <= kCentroidTol) break;
    }
    return out;
}

}  // namespace

LaplacianPair normalized_laplacian(const AffinityMatrix& affinity) {
    const Matrix& a = affinity.values;
    if (a.rows() != a.cols()) throw DataError("affinity matrix is not square");
    const Index n = a.rows();
    Vector degrees = a.colwise().sum();
    for (Index i = 0; i < n; ++i) degrees(i) = std::max(degrees(i), kDegreeFloor);
    const Vector dinv_sqrt = degrees.cwiseSqrt().cwiseInverse();
    Matrix l_sym = Matrix::Identity(n, n) - dinv_sqrt.asDiagonal() * a * dinv_sqrt.asDiagonal();
    return LaplacianPair{std::move(l_sym), std::move(degrees)};
}

SoftEmbedding spectral_embedding(const LaplacianPair& lap, int n) {
    const Index n_points = lap.l_sym.rows();
    if (n < 1 || n > n_points) throw DataError("embedding dimension outside [1, N]");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap.l_sym);
    if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failure");
    Matrix q = eig.eigenvectors().leftCols(n);  // ascending eigenvalues
    for (Index c = 0; c < q.cols(); ++c) {
        Index arg = 0;
        double best = -1.0;
        for (Index i = 0; i < q.rows(); ++i) {
            const double mag = std::abs(q(i, c));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (q(arg, c) < 0.0) q.col(c) = -q.col(c);
    }
    return SoftEmbedding{std::move(q)};
}

KMeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed) {
    const Index n_points = points.rows();
    if (k < 1 || k > n_points) throw DataError("k outside [1, N]");
    if (restarts < 1) throw DataError("restarts must be >= 1");

    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> best_assignment;
    for (int r = 0; r < restarts; ++r) {
        LloydOutcome out;
        for (int attempt = 0; attempt < kMaxReseedAttempts; ++attempt) {
            Rng rng(derive_seed(seed, {stream::kRestart, static_cast<std::uint64_t>(r),
                                       static_cast<std::uint64_t>(attempt)}));
            out = lloyd(points, k, kmeans_pp_seed(points, k, rng));
            if (!out.empty_cluster) break;
        }
        if (out.empty_cluster) {
            // duplicated points can make every seeding collapse; hand each
            // empty cluster a point stolen from a multi-member cluster
            std::vector<Index> counts(static_cast<size_t>(k), 0);
            for (int a : out.assignment) ++counts[static_cast<size_t>(a)];
            for (int c = 0; c < k; ++c) {
                while (counts[static_cast<size_t>(c)] == 0) {
                    for (Index i = 0; i < n_points; ++i) {
                        if (counts[static_cast<size_t>(out.assignment[static_cast<size_t>(i)])] > 1) {
                            --counts[static_cast<size_t>(out.assignment[static_cast<size_t>(i)])];
                            out.assignment[static_cast<size_t>(i)] = c;
                            ++counts[static_cast<size_t>(c)];
                            break;
                        }
                    }
                }
            }
            // recompute the cost for the patched assignment
            Matrix centroids = Matrix::Zero(k, points.cols());
            for (Index i = 0; i < n_points; ++i) {
                centroids.row(out.assignment[static_cast<size_t>(i)]) += points.row(i);
            }
            for (int c = 0; c < k; ++c) centroids.row(c) /= static_cast<double>(counts[static_cast<size_t>(c)]);
            out.cost = 0.0;
            for (Index i = 0; i < n_points; ++i) {
                out.cost += (points.row(i) - centroids.row(out.assignment[static_cast<size_t>(i)]))
                                .squaredNorm();
            }
        }
        if (out.cost < best_cost) {
            best_cost = out.cost;
            best_assignment = out.assignment;
        }
    }

    std::vector<int> labels(best_assignment.size());
    for (size_t i = 0; i < labels.size(); ++i) labels[i] = best_assignment[i] + 1;
    return KMeansResult{make_segmentation(std::move(labels), k), best_cost, restarts};
}

ClusterOutput cluster(const Matrix& coefficients, int n, int restarts, std::uint64_t seed) {
    if (n < 2) throw DataError("cluster count must be >= 2");
    const AffinityMatrix affinity = affinity_from_coefficients(coefficients);
    const bool degenerate = affinity.values.lpNorm<Eigen::Infinity>() == 0.0;
    const LaplacianPair lap = normalized_laplacian(affinity);
    SoftEmbedding embedding = spectral_embedding(lap, n);
    KMeansResult km = kmeans(embedding.rows, n, restarts, seed);
    return ClusterOutput{std::move(km.labels), std::move(embedding), km.cost, degenerate};
}

}  // namespace s3c
