#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "s3c/rng.hpp"
#include "s3c/spectral.hpp"

using namespace s3c;

namespace {

AffinityMatrix random_affinity(Index n, Rng& rng, double density = 1.0) {
    Matrix a = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (rng.uniform() < density) {
                const double w = rng.uniform();
                a(i, j) = w;
                a(j, i) = w;
            }
        }
    }
    return {a};
}

}  // namespace

TEST_CASE("laplacian of a two-node path") {
    Matrix a(2, 2);
    a << 0, 1, 1, 0;
    const LaplacianPair lap = normalized_laplacian({a});
    CHECK(lap.degrees(0) == 1.0);
    CHECK(lap.degrees(1) == 1.0);
    CHECK(lap.l_sym(0, 0) == doctest::Approx(1.0));
    CHECK(lap.l_sym(0, 1) == doctest::Approx(-1.0));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap.l_sym);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(2.0));
}

TEST_CASE("all-zero affinity gives the identity laplacian") {
    const LaplacianPair lap = normalized_laplacian({Matrix::Zero(4, 4)});
    CHECK(lap.l_sym.isIdentity(0.0));
    CHECK(lap.degrees.minCoeff() == doctest::Approx(1e-12));
}

TEST_CASE("laplacian spectral properties") {
    Rng rng(71);
    const AffinityMatrix a = random_affinity(6, rng);
    const LaplacianPair lap = normalized_laplacian(a);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap.l_sym);
    CHECK(eig.eigenvalues()(0) >= -1e-10);
    CHECK(eig.eigenvalues()(5) <= 2.0 + 1e-8);
    // D^{1/2} 1 is the null vector
    const Vector null_vec = lap.degrees.cwiseSqrt();
    CHECK((lap.l_sym * null_vec).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("embedding separates disconnected components") {
    // two blocks of 3 nodes, fully connected inside
    Matrix a = Matrix::Zero(6, 6);
    for (int b = 0; b < 2; ++b) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i != j) a(3 * b + i, 3 * b + j) = 1.0;
            }
        }
    }
    const LaplacianPair lap = normalized_laplacian({a});
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap.l_sym);
    CHECK(eig.eigenvalues()(0) < 1e-10);
    CHECK(eig.eigenvalues()(1) < 1e-10);
    CHECK(eig.eigenvalues()(2) > 1e-3);  // exactly two components

    const SoftEmbedding emb = spectral_embedding(lap, 2);
    Matrix rows = emb.rows;
    for (Index i = 0; i < 6; ++i) rows.row(i) /= rows.row(i).norm();
    for (int b = 0; b < 2; ++b) {
        for (int i = 1; i < 3; ++i) {
            CHECK((rows.row(3 * b) - rows.row(3 * b + i)).norm() < 1e-8);
        }
    }
    CHECK((rows.row(0) - rows.row(3)).norm() > 0.5);
}

TEST_CASE("full embedding is orthonormal") {
    Rng rng(73);
    const AffinityMatrix a = random_affinity(7, rng);
    const SoftEmbedding emb = spectral_embedding(normalized_laplacian(a), 7);
    CHECK((emb.rows.transpose() * emb.rows - Matrix::Identity(7, 7)).lpNorm<Eigen::Infinity>() <
          1e-10);
}

TEST_CASE("embedding minimizes the Rayleigh quotient") {
    Rng rng(79);
    const AffinityMatrix a = random_affinity(9, rng);
    const LaplacianPair lap = normalized_laplacian(a);
    const SoftEmbedding emb = spectral_embedding(lap, 3);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap.l_sym);
    const double expected = eig.eigenvalues().head(3).sum();
    const double got = (emb.rows.transpose() * lap.l_sym * emb.rows).trace();
    CHECK(got == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("embedding sign is deterministic") {
    Rng rng(83);
    const AffinityMatrix a = random_affinity(8, rng);
    const LaplacianPair lap = normalized_laplacian(a);
    const SoftEmbedding e1 = spectral_embedding(lap, 4);
    const SoftEmbedding e2 = spectral_embedding(lap, 4);
    CHECK(e1.rows == e2.rows);
    for (Index c = 0; c < 4; ++c) {
        Index arg = 0;
        e1.rows.col(c).cwiseAbs().maxCoeff(&arg);
        CHECK(e1.rows(arg, c) > 0.0);
    }
}

TEST_CASE("kmeans on separated clusters") {
    Matrix points(10, 2);
    for (int i = 0; i < 5; ++i) points.row(i) << 0, 0;
    for (int i = 5; i < 10; ++i) points.row(i) << 10, 10;
    const KMeansResult result = kmeans(points, 2, 5, 1);
    CHECK(result.cost == doctest::Approx(0.0));
    CHECK(result.labels.labels[0] == result.labels.labels[4]);
    CHECK(result.labels.labels[5] == result.labels.labels[9]);
    CHECK(result.labels.labels[0] != result.labels.labels[5]);
}

TEST_CASE("kmeans with k equal to the point count") {
    Matrix points(4, 2);
    points << 0, 0, 1, 0, 0, 1, 1, 1;
    const KMeansResult result = kmeans(points, 4, 3, 7);
    CHECK(result.cost == doctest::Approx(0.0));
}

TEST_CASE("kmeans duplicates still fill every cluster") {
    Matrix points = Matrix::Zero(4, 2);  // all identical
    const KMeansResult result = kmeans(points, 2, 2, 5);
    std::vector<int> counts(2, 0);
    for (int l : result.labels.labels) ++counts[static_cast<size_t>(l - 1)];
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);
}

TEST_CASE("kmeans matches the exhaustive oracle on three blobs") {
    Rng rng(89);
    Matrix points(12, 2);
    const double centers[3][2] = {{0, 0}, {8, 0}, {4, 7}};
    std::vector<int> blob(12);
    for (int i = 0; i < 12; ++i) {
        const int b = i / 4;
        blob[static_cast<size_t>(i)] = b + 1;
        points.row(i) << centers[b][0] + 0.1 * rng.normal(), centers[b][1] + 0.1 * rng.normal();
    }
    const KMeansResult result = kmeans(points, 3, 20, 3);

    // exhaustive search over all 3^12 assignments
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> assign(12, 0);
    while (true) {
        Matrix centroids = Matrix::Zero(3, 2);
        std::vector<int> counts(3, 0);
        for (int i = 0; i < 12; ++i) {
            centroids.row(assign[static_cast<size_t>(i)]) += points.row(i);
            ++counts[static_cast<size_t>(assign[static_cast<size_t>(i)])];
        }
        bool ok = true;
        for (int c = 0; c < 3; ++c) {
            if (counts[static_cast<size_t>(c)] == 0) { ok = false; break; }
            centroids.row(c) /= counts[static_cast<size_t>(c)];
        }
        if (ok) {
            double cost = 0.0;
            for (int i = 0; i < 12; ++i) {
                cost += (points.row(i) - centroids.row(assign[static_cast<size_t>(i)])).squaredNorm();
            }
            best = std::min(best, cost);
        }
        int pos = 11;
        while (pos >= 0 && assign[static_cast<size_t>(pos)] == 2) assign[static_cast<size_t>(pos--)] = 0;
        if (pos < 0) break;
        ++assign[static_cast<size_t>(pos)];
    }
    CHECK(result.cost == doctest::Approx(best).epsilon(1e-9));

    // labels must match the blobs
    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
            CHECK((result.labels.labels[static_cast<size_t>(i)] ==
                   result.labels.labels[static_cast<size_t>(j)]) ==
                  (blob[static_cast<size_t>(i)] == blob[static_cast<size_t>(j)]));
        }
    }
}

TEST_CASE("more restarts never increase the cost") {
    Rng rng(97);
    Matrix points(20, 3);
    for (Index i = 0; i < 20; ++i) {
        for (Index j = 0; j < 3; ++j) points(i, j) = rng.normal();
    }
    const double one = kmeans(points, 4, 1, 11).cost;
    const double many = kmeans(points, 4, 20, 11).cost;
    CHECK(many <= one + 1e-12);
}

TEST_CASE("cluster on a block-diagonal coefficient matrix") {
    Matrix c = Matrix::Zero(8, 8);
    c.topLeftCorner(4, 4).setConstant(0.5);
    c.bottomRightCorner(4, 4).setConstant(0.5);
    c.diagonal().setZero();
    const ClusterOutput out = cluster(c, 2, 5, 3);
    CHECK_FALSE(out.degenerate_affinity);
    CHECK(out.labels.labels[0] == out.labels.labels[3]);
    CHECK(out.labels.labels[4] == out.labels.labels[7]);
    CHECK(out.labels.labels[0] != out.labels.labels[4]);
}

TEST_CASE("cluster flags an all-zero affinity") {
    const ClusterOutput out = cluster(Matrix::Zero(5, 5), 2, 3, 1);
    CHECK(out.degenerate_affinity);
    CHECK(out.labels.labels.size() == 5);
}

TEST_CASE("cluster is deterministic") {
    Rng rng(101);
    Matrix c(10, 10);
    for (Index j = 0; j < 10; ++j) {
        for (Index i = 0; i < 10; ++i) c(i, j) = rng.normal();
    }
    c.diagonal().setZero();
    const ClusterOutput a = cluster(c, 3, 10, 42);
    const ClusterOutput b = cluster(c, 3, 10, 42);
    CHECK(a.labels.labels == b.labels.labels);
    CHECK(a.kmeans_cost == b.kmeans_cost);
    CHECK(a.embedding.rows == b.embedding.rows);
}
