#include "s3c/synth.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "s3c/rng.hpp"

namespace s3c {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    }
    return m;
}

}  // namespace

SynthDataset generate(const SynthSpec& spec) {
    if (spec.subspace_dim >= spec.ambient_dim) throw DataError("subspace dim must be < ambient dim");
    if (spec.points_per < 1 || spec.subspaces < 1) throw DataError("need at least one point per subspace");
    if (spec.corruption < 0.0 || spec.corruption > 1.0) throw DataError("corruption must be in [0,1]");

    const Index d_ambient = spec.ambient_dim;
    const Index n_points = static_cast<Index>(spec.subspaces) * spec.points_per;
    SynthDataset out;
    out.subspaces = spec.subspaces;
    out.clean_x.resize(d_ambient, n_points);
    out.truth.resize(static_cast<size_t>(n_points));

    for (int j = 0; j < spec.subspaces; ++j) {
        Rng rng(derive_seed(spec.seed, {stream::kSubspace, static_cast<std::uint64_t>(j)}));
        const Matrix random = gaussian_matrix(d_ambient, d_ambient, rng);
        Eigen::BDCSVD<Matrix> svd(random, Eigen::ComputeThinU);
        const Matrix basis = svd.matrixU().leftCols(spec.subspace_dim);
        const Matrix coords = gaussian_matrix(spec.subspace_dim, spec.points_per, rng);
        const Index offset = static_cast<Index>(j) * spec.points_per;
        out.clean_x.middleCols(offset, spec.points_per) = basis * coords;
        for (int p = 0; p < spec.points_per; ++p) out.truth[static_cast<size_t>(offset + p)] = j + 1;
    }

    out.x = out.clean_x;
    out.corrupted_mask.setConstant(d_ambient, n_points, false);
    const auto total = static_cast<std::uint64_t>(d_ambient * n_points);
    const auto n_corrupt =
        static_cast<std::uint64_t>(std::floor(spec.corruption * static_cast<double>(total)));
    if (n_corrupt > 0) {
        const Vector col_norms = out.clean_x.colwise().norm();
        Rng rng(derive_seed(spec.seed, {stream::kCorruption}));
        // partial Fisher-Yates over the linear (column-major) entry indices
        std::vector<std::uint64_t> indices(total);
        for (std::uint64_t i = 0; i < total; ++i) indices[i] = i;
        for (std::uint64_t k = 0; k < n_corrupt; ++k) {
            const std::uint64_t pick = k + rng.below(total - k);
            std::swap(indices[k], indices[pick]);
            const auto linear = indices[k];
            const Index row = static_cast<Index>(linear % static_cast<std::uint64_t>(d_ambient));
            const Index col = static_cast<Index>(linear / static_cast<std::uint64_t>(d_ambient));
            out.x(row, col) += rng.normal() * std::sqrt(spec.noise_factor * col_norms(col));
            out.corrupted_mask(row, col) = true;
        }
    }
    return out;
}

std::vector<Constraint> sample_side_info(const std::vector<int>& truth, double fraction,
                                         std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) throw DataError("fraction must be in [0,1]");
    const auto n = static_cast<std::uint64_t>(truth.size());
    const std::uint64_t total_pairs = n * (n - 1) / 2;
    const auto n_sample =
        static_cast<std::uint64_t>(std::floor(fraction * static_cast<double>(total_pairs)));
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(total_pairs);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = i + 1; j < n; ++j) {
            pairs.emplace_back(static_cast<int>(i + 1), static_cast<int>(j + 1));
        }
    }
    Rng rng(derive_seed(seed, {stream::kSideInfo}));
    std::vector<Constraint> constraints;
    constraints.reserve(n_sample);
    for (std::uint64_t k = 0; k < n_sample; ++k) {
        const std::uint64_t pick = k + rng.below(total_pairs - k);
        std::swap(pairs[k], pairs[pick]);
        const auto [i, j] = pairs[k];
        const bool same = truth[static_cast<size_t>(i - 1)] == truth[static_cast<size_t>(j - 1)];
        constraints.push_back({i, j, same ? LinkType::must_link : LinkType::cannot_link});
    }
    return constraints;
}

}  // namespace s3c
