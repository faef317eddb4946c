#include "crisp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crisp/errors.hpp"
#include "crisp/rng.hpp"

namespace crisp {

namespace {

double sq_dist(const Matrix& points, std::size_t row, const std::vector<double>& center,
               std::size_t d) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = static_cast<double>(points.at(row, j)) - center[j];
        acc += diff * diff;
    }
    return acc;
}

// Sample an index proportionally to `mass`; zero total mass falls back to the
// lowest-index entry with allowed[i] (or plain lowest index).
std::size_t sample_proportional(const std::vector<double>& mass, Rng& rng) {
    double total = 0.0;
    for (double m : mass) total += m;
    if (total <= 0.0) {
        return 0;
    }
    const double target = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        acc += mass[i];
        if (target < acc) return i;
    }
    return mass.size() - 1;
}

} // namespace

ClusterResult weighted_kmeans(const Matrix& points, std::span<const float> weights,
                              std::size_t k, std::uint64_t seed, std::size_t max_iter) {
    const std::size_t n = points.rows;
    const std::size_t d = points.cols;
    if (k == 0 || k > n) {
        throw ConfigError("weighted_kmeans: k=" + std::to_string(k) + " with n=" +
                          std::to_string(n));
    }
    if (weights.size() != n) {
        throw ShapeError("weighted_kmeans: " + std::to_string(weights.size()) + " weights for " +
                         std::to_string(n) + " points");
    }
    double weight_total = 0.0;
    for (float w : weights) {
        if (!(w >= 0.0f)) throw ConfigError("weighted_kmeans: negative or NaN weight");
        weight_total += w;
    }
    if (weight_total <= 0.0) throw ConfigError("weighted_kmeans: all weights zero");

    Rng rng(seed);

    // Weighted k-means++ seeding: first center ~ weight, later centers
    // ~ weight * min squared distance. Zero remaining mass (duplicates) falls
    // back to the lowest-index unchosen point.
    std::vector<std::vector<double>> centers(k, std::vector<double>(d, 0.0));
    std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t pick = 0;
        if (c == 0) {
            std::vector<double> mass(n);
            for (std::size_t i = 0; i < n; ++i) mass[i] = weights[i];
            pick = sample_proportional(mass, rng);
        } else {
            std::vector<double> mass(n);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mass[i] = chosen[i] ? 0.0 : static_cast<double>(weights[i]) * min_sq[i];
                total += mass[i];
            }
            if (total > 0.0) {
                pick = sample_proportional(mass, rng);
            } else {
                pick = 0;
                while (pick < n && chosen[pick]) ++pick;
                if (pick == n) pick = 0;
            }
        }
        chosen[pick] = 1;
        for (std::size_t j = 0; j < d; ++j) centers[c][j] = points.at(pick, j);
        for (std::size_t i = 0; i < n; ++i)
            min_sq[i] = std::min(min_sq[i], sq_dist(points, i, centers[c], d));
    }

    ClusterResult out;
    out.assignments.assign(n, 0);

    auto assign_all = [&]() {
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double dist = sq_dist(points, i, centers[c], d);
                if (dist < best) { // strict: ties keep the lowest index
                    best = dist;
                    arg = c;
                }
            }
            out.assignments[i] = arg;
            inertia += static_cast<double>(weights[i]) * best;
        }
        return inertia;
    };

    double inertia = assign_all();
    std::vector<std::size_t> prev_assignments;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        prev_assignments = out.assignments;
        // Weighted centroid update; clusters whose total weight is zero keep
        // their previous centers (their members still count for repair).
        std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
        std::vector<double> mass(k, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = out.assignments[i];
            const double w = weights[i];
            mass[c] += w;
            count[c] += 1;
            for (std::size_t j = 0; j < d; ++j)
                sums[c][j] += w * static_cast<double>(points.at(i, j));
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (mass[c] > 0.0) {
                for (std::size_t j = 0; j < d; ++j) centers[c][j] = sums[c][j] / mass[c];
            } else if (count[c] > 0) {
                // zero-weight members: unweighted mean
                std::vector<double> acc(d, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    if (out.assignments[i] != c) continue;
                    for (std::size_t j = 0; j < d; ++j) acc[j] += points.at(i, j);
                }
                for (std::size_t j = 0; j < d; ++j) centers[c][j] = acc[j] / count[c];
            }
        }

        double next = assign_all();

        // Empty-cluster repair: reseed on the point farthest from its
        // centroid; ties broken by lowest index.
        for (std::size_t c = 0; c < k; ++c) {
            bool empty = true;
            for (std::size_t i = 0; i < n && empty; ++i)
                if (out.assignments[i] == c) empty = false;
            if (!empty) continue;
            std::size_t far = 0;
            double far_dist = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dist = sq_dist(points, i, centers[out.assignments[i]], d);
                if (dist > far_dist) {
                    far_dist = dist;
                    far = i;
                }
            }
            for (std::size_t j = 0; j < d; ++j) centers[c][j] = points.at(far, j);
            out.assignments[far] = c;
            next = assign_all();
        }

        out.inertia_history.push_back(next);
        out.iterations = iter + 1;
        inertia = next;
        if (out.assignments == prev_assignments) break;
    }

    out.inertia = inertia;
    out.centroids = Matrix(k, d);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j)
            out.centroids.at(c, j) = static_cast<float>(centers[c][j]);
    return out;
}

Matrix random_projection(const Matrix& m, std::size_t d_out, std::uint64_t seed) {
    if (d_out < 1) throw ConfigError("random_projection: d_out must be >= 1");
    Rng rng(seed);
    Matrix proj(m.cols, d_out);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d_out));
    for (std::size_t i = 0; i < proj.size(); ++i)
        proj.data[i] = static_cast<float>(rng.gaussian() * inv_sqrt);
    return matmul(m, proj);
}

} // namespace crisp
