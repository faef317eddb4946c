#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "crisp/cluster.hpp"
#include "crisp/errors.hpp"
#include "support.hpp"

using namespace crisp;
using testsupport::random_matrix;

namespace {

// Brute force over all k^n assignments (n small): best weighted inertia with
// centroids at weighted means.
double brute_force_inertia(const Matrix& pts, const std::vector<float>& w, std::size_t k) {
    const std::size_t n = pts.rows, d = pts.cols;
    std::vector<std::size_t> assign(n, 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_assign;
    while (true) {
        std::vector<std::vector<double>> mean(k, std::vector<double>(d, 0.0));
        std::vector<double> mass(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            mass[assign[i]] += w[i];
            for (std::size_t j = 0; j < d; ++j) mean[assign[i]][j] += w[i] * pts.at(i, j);
        }
        bool valid = true;
        for (std::size_t c = 0; c < k; ++c) {
            if (mass[c] == 0.0) { valid = false; break; }
            for (std::size_t j = 0; j < d; ++j) mean[c][j] /= mass[c];
        }
        if (valid) {
            double inertia = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = pts.at(i, j) - mean[assign[i]][j];
                    inertia += w[i] * diff * diff;
                }
            if (inertia < best) {
                best = inertia;
                best_assign = assign;
            }
        }
        std::size_t pos = 0;
        while (pos < n && ++assign[pos] == k) assign[pos++] = 0;
        if (pos == n) break;
    }
    return best;
}

} // namespace

TEST_SUITE_BEGIN("numerics");

TEST_CASE("kmeans with k == n gives singleton clusters") {
    const Matrix pts = random_matrix(5, 3, 17);
    const std::vector<float> w(5, 1.0f);
    const auto res = weighted_kmeans(pts, w, 5, 42);
    std::set<std::size_t> distinct(res.assignments.begin(), res.assignments.end());
    CHECK(distinct.size() == 5);
    CHECK(res.inertia == doctest::Approx(0.0));
}

TEST_CASE("kmeans separates two blobs, matching brute force") {
    Rng rng(3);
    Matrix pts(8, 2);
    std::vector<float> w(8, 1.0f);
    for (std::size_t i = 0; i < 8; ++i) {
        const double cx = i < 4 ? 0.0 : 10.0;
        pts.at(i, 0) = static_cast<float>(cx + 0.1 * rng.gaussian());
        pts.at(i, 1) = static_cast<float>(cx + 0.1 * rng.gaussian());
    }
    const auto res = weighted_kmeans(pts, w, 2, 7);
    // blob-pure assignment
    for (std::size_t i = 1; i < 4; ++i) CHECK(res.assignments[i] == res.assignments[0]);
    for (std::size_t i = 5; i < 8; ++i) CHECK(res.assignments[i] == res.assignments[4]);
    CHECK(res.assignments[0] != res.assignments[4]);
    CHECK(res.inertia == doctest::Approx(brute_force_inertia(pts, w, 2)).epsilon(1e-6));
}

TEST_CASE("heavy point dominates the weighted centroid") {
    Matrix pts(5, 2);
    std::vector<float> w(5, 1.0f);
    for (std::size_t i = 0; i < 4; ++i) {
        pts.at(i, 0) = static_cast<float>(i);
        pts.at(i, 1) = 1.0f;
    }
    pts.at(4, 0) = 9.0f;
    pts.at(4, 1) = -3.0f;
    w[4] = 1e6f;
    const auto res = weighted_kmeans(pts, w, 1, 11);
    CHECK(std::abs(res.centroids.at(0, 0) - 9.0) < 1e-2);
    CHECK(std::abs(res.centroids.at(0, 1) + 3.0) < 1e-2);
}

TEST_CASE("kmeans inertia history is non-increasing") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Matrix pts = random_matrix(40, 4, 900 + seed);
        const std::vector<float> w(40, 1.0f);
        const auto res = weighted_kmeans(pts, w, 5, seed);
        for (std::size_t i = 1; i < res.inertia_history.size(); ++i)
            CHECK(res.inertia_history[i] <= res.inertia_history[i - 1] + 1e-9);
    }
}

TEST_CASE("kmeans determinism and parameter validation") {
    const Matrix pts = random_matrix(12, 3, 5);
    std::vector<float> w(12, 1.0f);
    const auto a = weighted_kmeans(pts, w, 3, 99);
    const auto b = weighted_kmeans(pts, w, 3, 99);
    CHECK(a.assignments == b.assignments);
    CHECK(a.centroids == b.centroids);

    CHECK_THROWS_AS(weighted_kmeans(pts, w, 13, 1), ConfigError);
    std::fill(w.begin(), w.end(), 0.0f);
    CHECK_THROWS_AS(weighted_kmeans(pts, w, 3, 1), ConfigError);
}

TEST_CASE("random projection shape, zeros, determinism") {
    const Matrix m = random_matrix(5, 20, 8);
    const Matrix p = random_projection(m, 7, 123);
    CHECK(p.rows == 5);
    CHECK(p.cols == 7);

    const Matrix z = random_projection(Matrix(4, 20), 7, 123);
    for (float v : z.data) CHECK(v == 0.0f);

    const Matrix p2 = random_projection(m, 7, 123);
    CHECK(p == p2);
}

TEST_CASE("random projection roughly preserves pairwise distances") {
    const Matrix m = random_matrix(10, 256, 55);
    const Matrix p = random_projection(m, 32, 77);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = i + 1; j < m.rows; ++j) {
            double d_in = 0.0, d_out = 0.0;
            for (std::size_t t = 0; t < m.cols; ++t) {
                const double diff = static_cast<double>(m.at(i, t)) - m.at(j, t);
                d_in += diff * diff;
            }
            for (std::size_t t = 0; t < p.cols; ++t) {
                const double diff = static_cast<double>(p.at(i, t)) - p.at(j, t);
                d_out += diff * diff;
            }
            const double ratio = std::sqrt(d_out / d_in);
            CHECK(ratio > 0.5);
            CHECK(ratio < 1.5);
        }
    }
}

TEST_SUITE_END();
