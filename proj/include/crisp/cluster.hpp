#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crisp/matrix.hpp"

namespace crisp {

struct ClusterResult {
    std::vector<std::size_t> assignments; // one per input row, < k
    Matrix centroids;                     // k x d
    double inertia = 0.0;                 // weighted sum of squared distances
    std::vector<double> inertia_history;  // one entry per Lloyd iteration
    std::size_t iterations = 0;
};

/// Lloyd iterations with importance-weighted centroid updates and weighted
/// k-means++ seeding. Empty clusters are repaired by reseeding them on the
/// point farthest from its centroid (ties -> lowest index). Deterministic
/// given the seed.
ClusterResult weighted_kmeans(const Matrix& points, std::span<const float> weights,
                              std::size_t k, std::uint64_t seed, std::size_t max_iter = 100);

/// Multiply by a seeded Gaussian matrix scaled by 1/sqrt(d_out).
Matrix random_projection(const Matrix& m, std::size_t d_out, std::uint64_t seed);

} // namespace crisp
