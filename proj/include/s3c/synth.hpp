#pragma once

#include <cstdint>
#include <vector>

#include "s3c/types.hpp"

namespace s3c {

/// Union-of-subspaces generator settings. Defaults give 15 random
/// 5-dimensional subspaces of R^100 with 10 points each.
struct SynthSpec {
    int ambient_dim = 100;      // D
    int subspace_dim = 5;       // d
    int subspaces = 15;         // n
    int points_per = 10;        // N_j
    double corruption = 0.0;    // fraction p of entries corrupted
    double noise_factor = 0.3;  // noise variance scale relative to column norm
    std::uint64_t seed = 1;
};

struct SynthDataset {
    Matrix x;        // D x N, corrupted (columns not normalized)
    Matrix clean_x;  // uncorrupted copy
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> corrupted_mask;
    std::vector<int> truth;  // 1-based subspace labels
    int subspaces = 0;
};

/// Per subspace j: an orthonormal basis from the top-d left singular vectors
/// of a random Gaussian matrix, then points U_j * Y_j with Gaussian Y_j.
/// Corruption adds Gaussian noise of variance noise_factor * ||column||_2 to
/// floor(p * D * N) entries chosen uniformly without replacement.
/// Deterministic given spec.seed (one stream per subspace plus one for the
/// corruption draw).
SynthDataset generate(const SynthSpec& spec);

/// floor(p * N(N-1)/2) unordered pairs sampled uniformly without replacement;
/// each becomes must-link when the truth labels agree, cannot-link otherwise.
std::vector<Constraint> sample_side_info(const std::vector<int>& truth, double fraction,
                                         std::uint64_t seed);

}  // namespace s3c
