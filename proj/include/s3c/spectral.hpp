#pragma once

#include <cstdint>

#include "s3c/types.hpp"

namespace s3c {

/// Symmetric normalized Laplacian I - D^{-1/2} A D^{-1/2} with its (floored)
/// degree vector.
struct LaplacianPair {
    Matrix l_sym;
    Vector degrees;
};

struct KMeansResult {
    HardSegmentation labels;
    double cost = 0.0;  // sum of squared distances to assigned centroids
    int restarts_run = 0;
};

/// Everything spectral clustering produces: the quantized labels, the raw
/// embedding (rows of the bottom eigenvectors), and the winning k-means cost.
struct ClusterOutput {
    HardSegmentation labels;
    SoftEmbedding embedding;
    double kmeans_cost = 0.0;
    bool degenerate_affinity = false;  // all-zero affinity
};

/// Degrees are column sums floored at 1e-12 so isolated nodes stay finite.
LaplacianPair normalized_laplacian(const AffinityMatrix& affinity);

/// Eigenvectors of the n smallest eigenvalues of L_sym, orthonormal, with a
/// deterministic sign: each column's largest-magnitude entry (lowest index on
/// ties) is made positive.
SoftEmbedding spectral_embedding(const LaplacianPair& lap, int n);

/// Lloyd's algorithm from k-means++ seeding, best of `restarts` independent
/// streams derived from `seed`. An empty cluster re-seeds that restart.
KMeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed);

/// affinity -> Laplacian -> embedding -> k-means on the raw embedding rows.
ClusterOutput cluster(const Matrix& coefficients, int n, int restarts, std::uint64_t seed);

}  // namespace s3c
