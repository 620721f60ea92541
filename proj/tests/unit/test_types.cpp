#include <doctest.h>

#include <cmath>

#include "s3c/rng.hpp"
#include "s3c/types.hpp"

using namespace s3c;

namespace {

/// Grid minimizer of tau*|c| + (c-x)^2/2 over [-4, 4], step 1e-4. The
/// independent oracle for the shrinkage operator.
double grid_prox(double x, double tau) {
    double best_c = -4.0;
    double best_v = tau * 4.0 + 0.5 * (-4.0 - x) * (-4.0 - x);
    for (long k = 1; k <= 80000; ++k) {
        const double c = -4.0 + static_cast<double>(k) * 1e-4;
        const double v = tau * std::abs(c) + 0.5 * (c - x) * (c - x);
        if (v < best_v) {
            best_v = v;
            best_c = c;
        }
    }
    return best_c;
}

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    }
    return m;
}

std::vector<int> random_labels(Index n_points, int n, Rng& rng) {
    // every cluster nonempty
    std::vector<int> labels(static_cast<size_t>(n_points));
    for (Index i = 0; i < n_points; ++i) {
        labels[static_cast<size_t>(i)] =
            i < n ? static_cast<int>(i) + 1 : static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
    }
    return labels;
}

}  // namespace

TEST_CASE("shrink matches its definition") {
    CHECK(shrink(1.2, 0.5) == doctest::Approx(0.7));
    CHECK(shrink(-0.3, 0.5) == 0.0);
    CHECK(shrink(-2.0, 0.25) == doctest::Approx(-1.75));
}

TEST_CASE("shrink is the exact prox of the absolute value") {
    CHECK(std::abs(shrink(-2.0, 0.25) - grid_prox(-2.0, 0.25)) < 1e-3);
    Rng rng(101);
    for (int i = 0; i < 500; ++i) {
        const double x = 6.0 * rng.uniform() - 3.0;
        const double tau = 1.5 * rng.uniform();
        CHECK(std::abs(shrink(x, tau) - grid_prox(x, tau)) < 1e-3);
    }
}

TEST_CASE("affinity from coefficients") {
    Matrix c(2, 2);
    c << 0, 2, -4, 0;
    const Matrix a = affinity_from_coefficients(c).values;
    CHECK(a(0, 0) == 0.0);
    CHECK(a(0, 1) == 3.0);
    CHECK(a(1, 0) == 3.0);
    CHECK(a(1, 1) == 0.0);

    CHECK(affinity_from_coefficients(Matrix::Zero(3, 3)).values.isZero(0.0));

    Rng rng(7);
    const Matrix r = random_matrix(5, 5, rng);
    const Matrix ar = affinity_from_coefficients(r).values;
    for (Index i = 0; i < 5; ++i) {
        for (Index j = 0; j < 5; ++j) {
            CHECK(ar(i, j) == 0.5 * (std::abs(r(i, j)) + std::abs(r(j, i))));
            CHECK(ar(i, j) == ar(j, i));  // exactly symmetric
            CHECK(ar(i, j) >= 0.0);
        }
    }
}

TEST_CASE("hard structure matrix") {
    const auto seg = make_segmentation({1, 1, 2}, 2);
    const Matrix theta = structure_from_hard(seg).values;
    Matrix expected(3, 3);
    expected << 0, 0, 1, 0, 0, 1, 1, 1, 0;
    CHECK(theta == expected);

    const auto same = make_segmentation({1, 1, 1, 1}, 1);
    CHECK(structure_from_hard(same).values.isZero(0.0));

    // against the definition through the explicit indicator matrix
    Rng rng(13);
    const auto labels = random_labels(10, 4, rng);
    const auto rseg = make_segmentation(labels, 4);
    const Matrix q = rseg.indicator();
    const Matrix rt = structure_from_hard(rseg).values;
    for (Index i = 0; i < 10; ++i) {
        for (Index j = 0; j < 10; ++j) {
            CHECK(rt(i, j) == doctest::Approx(0.5 * (q.row(i) - q.row(j)).squaredNorm()));
        }
    }
}

TEST_CASE("soft structure matrix") {
    Matrix rows(3, 2);
    rows << 1, 0, 1, 0, 1, 0;
    CHECK(structure_from_soft({rows}).values.isZero(0.0));

    Matrix ortho(2, 2);
    ortho << 1, 0, 0, 1;
    CHECK(structure_from_soft({ortho}).values(0, 1) == doctest::Approx(1.0));

    Matrix antipodal(2, 2);
    antipodal << 1, 0, -1, 0;
    CHECK(structure_from_soft({antipodal}).values(0, 1) == doctest::Approx(2.0));

    // normalization happens inside; compare against the direct formula
    Rng rng(29);
    Matrix emb = random_matrix(6, 3, rng);
    const Matrix theta = structure_from_soft({emb}).values;
    Matrix qn = emb;
    for (Index i = 0; i < 6; ++i) qn.row(i) /= qn.row(i).norm();
    for (Index i = 0; i < 6; ++i) {
        for (Index j = 0; j < 6; ++j) {
            if (i == j) continue;
            CHECK(theta(i, j) ==
                  doctest::Approx(0.5 * (qn.row(i) - qn.row(j)).squaredNorm()).epsilon(1e-12));
        }
    }
    validate_structure(structure_from_soft({emb}));
}

TEST_CASE("soft structure leaves zero rows at zero") {
    Matrix rows(2, 2);
    rows << 0, 0, 3, 0;
    const Matrix theta = structure_from_soft({rows}).values;
    CHECK(theta(0, 1) == doctest::Approx(0.5));  // half the unit row's norm
}

TEST_CASE("subspace structured norm") {
    Rng rng(31);
    const Matrix c = random_matrix(6, 6, rng);
    const StructureMatrix zero{Matrix::Zero(6, 6), StructureKind::hard};
    CHECK(subspace_structured_norm(c, zero) == 0.0);

    // block coefficients under the true hard structure vanish
    const auto seg = make_segmentation({1, 1, 1, 2, 2, 2}, 2);
    Matrix block = Matrix::Zero(6, 6);
    block.topLeftCorner(3, 3).setConstant(0.5);
    block.bottomRightCorner(3, 3).setConstant(-0.25);
    block.diagonal().setZero();
    CHECK(subspace_structured_norm(block, structure_from_hard(seg)) == 0.0);
}

TEST_CASE("structured norm equals the spectral clustering objective") {
    Rng rng(37);
    for (int rep = 0; rep < 100; ++rep) {
        const Index n_points = 5 + static_cast<Index>(rng.below(8));
        const int n = 2 + static_cast<int>(rng.below(3));
        const Matrix c = random_matrix(n_points, n_points, rng);
        const auto seg = make_segmentation(random_labels(n_points, n, rng), n);
        const Matrix q = seg.indicator();
        const Matrix a = affinity_from_coefficients(c).values;
        double rhs = 0.0;
        for (Index i = 0; i < n_points; ++i) {
            for (Index j = 0; j < n_points; ++j) {
                rhs += 0.5 * a(i, j) * (q.row(i) - q.row(j)).squaredNorm();
            }
        }
        const double lhs = subspace_structured_norm(c, structure_from_hard(seg));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("data matrix validation") {
    CHECK_THROWS_AS(make_data_matrix(Matrix::Ones(3, 1)), DataError);
    Matrix with_zero_col = Matrix::Ones(3, 3);
    with_zero_col.col(1).setZero();
    CHECK_THROWS_AS(make_data_matrix(with_zero_col, true), DataError);
    CHECK_NOTHROW(make_data_matrix(with_zero_col, false));

    Matrix nan_col = Matrix::Ones(2, 2);
    nan_col(0, 0) = std::nan("");
    CHECK_THROWS_AS(make_data_matrix(nan_col), DataError);

    Rng rng(41);
    const DataMatrix normalized = make_data_matrix(random_matrix(4, 6, rng), true);
    for (Index j = 0; j < 6; ++j) {
        CHECK(normalized.values.col(j).norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(normalized.column_normalized);
}

TEST_CASE("segmentation validation") {
    CHECK_THROWS_AS(make_segmentation({1, 1, 3}, 3), DataError);  // cluster 2 empty
    CHECK_THROWS_AS(make_segmentation({0, 1}, 2), DataError);
    CHECK_THROWS_AS(make_segmentation({1, 4}, 3), DataError);
    const auto seg = make_segmentation({2, 1, 2}, 2);
    CHECK(seg.indicator().rowwise().sum().isOnes());
}

TEST_CASE("structure validation rejects bad matrices") {
    Matrix bad = Matrix::Zero(3, 3);
    bad(0, 1) = 0.5;
    bad(1, 0) = 0.5;
    CHECK_THROWS_AS(validate_structure({bad, StructureKind::hard}), DataError);
    CHECK_NOTHROW(validate_structure({bad, StructureKind::soft}));
    bad(1, 0) = 0.4;
    CHECK_THROWS_AS(validate_structure({bad, StructureKind::soft}), DataError);
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 1.0;
    CHECK_THROWS_AS(validate_structure({diag, StructureKind::hard}), DataError);
}
