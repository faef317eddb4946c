#include <doctest.h>

#include <cmath>

#include "crisp/errors.hpp"
#include "crisp/svd.hpp"
#include "support.hpp"

using namespace crisp;
using testsupport::random_matrix;

namespace {

double orthonormality_error(const Matrix& m) {
    // || M^T M - I ||_max over the column Gram matrix
    double worst = 0.0;
    for (std::size_t a = 0; a < m.cols; ++a) {
        for (std::size_t b = 0; b < m.cols; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m.rows; ++i)
                acc += static_cast<double>(m.at(i, a)) * m.at(i, b);
            worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

} // namespace

TEST_SUITE_BEGIN("numerics");

TEST_CASE("svd of a diagonal matrix") {
    const Matrix m(2, 2, {3, 0, 0, 1});
    const SvdResult f = svd(m);
    CHECK(f.s[0] == doctest::Approx(3.0));
    CHECK(f.s[1] == doctest::Approx(1.0));
    CHECK(std::abs(f.u.at(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(f.u.at(1, 1)) == doctest::Approx(1.0));
    // sign convention: dominant entry positive
    CHECK(f.u.at(0, 0) > 0.0f);
    CHECK(f.u.at(1, 1) > 0.0f);
}

TEST_CASE("svd of rank-1 outer product") {
    Rng rng(5);
    std::vector<float> x(6), y(4);
    for (auto& v : x) v = static_cast<float>(rng.gaussian());
    for (auto& v : y) v = static_cast<float>(rng.gaussian());
    Matrix m(6, 4);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = x[i] * y[j];
    double nx = 0.0, ny = 0.0;
    for (float v : x) nx += static_cast<double>(v) * v;
    for (float v : y) ny += static_cast<double>(v) * v;
    const SvdResult f = svd(m);
    CHECK(f.s[0] == doctest::Approx(std::sqrt(nx) * std::sqrt(ny)).epsilon(1e-5));
    for (std::size_t j = 1; j < f.s.size(); ++j) CHECK(f.s[j] < 1e-5 * f.s[0]);
}

TEST_CASE("svd reconstruction and orthonormality on random matrices") {
    const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
        {6, 4}, {4, 6}, {8, 8}, {17, 3}, {64, 64}, {32, 64}};
    std::uint64_t seed = 40;
    for (auto [rows, cols] : shapes) {
        const Matrix m = random_matrix(rows, cols, seed++);
        const SvdResult f = svd(m);
        CHECK(rel_frobenius_error(f.reconstruct(), m) < 1e-5);
        CHECK(orthonormality_error(f.u) < 1e-4);
        CHECK(orthonormality_error(f.v) < 1e-4);
        for (std::size_t j = 1; j < f.s.size(); ++j) CHECK(f.s[j] <= f.s[j - 1]);
    }
}

TEST_CASE("svd of zero and rank-deficient matrices keeps orthonormal factors") {
    const Matrix zero(3, 3);
    const SvdResult fz = svd(zero);
    for (float s : fz.s) CHECK(s == 0.0f);
    CHECK(orthonormality_error(fz.u) < 1e-4);

    Matrix deficient(4, 3);
    const Matrix col = random_matrix(4, 1, 9);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) deficient.at(i, j) = col.at(i, 0);
    const SvdResult fd = svd(deficient);
    CHECK(orthonormality_error(fd.u) < 1e-4);
    CHECK(orthonormality_error(fd.v) < 1e-4);
    CHECK(rel_frobenius_error(fd.reconstruct(), deficient) < 1e-5);
}

TEST_CASE("svd rejects empty input") {
    CHECK_THROWS_AS(svd(Matrix()), ShapeError);
}

TEST_CASE("pseudo inverse of invertible 2x2") {
    const Matrix m(2, 2, {4, 7, 2, 6});
    // exact inverse: 1/10 * [6 -7; -2 4]
    const Matrix p = pseudo_inverse(m);
    CHECK(p.at(0, 0) == doctest::Approx(0.6).epsilon(1e-5));
    CHECK(p.at(0, 1) == doctest::Approx(-0.7).epsilon(1e-5));
    CHECK(p.at(1, 0) == doctest::Approx(-0.2).epsilon(1e-5));
    CHECK(p.at(1, 1) == doctest::Approx(0.4).epsilon(1e-5));
}

TEST_CASE("pseudo inverse of zero matrix is zero") {
    const Matrix p = pseudo_inverse(Matrix(3, 2));
    for (float v : p.data) CHECK(v == 0.0f);
}

namespace {
void check_penrose(const Matrix& m, const Matrix& p) {
    // the four Penrose identities
    const Matrix mpm = matmul(matmul(m, p), m);
    const Matrix pmp = matmul(matmul(p, m), p);
    CHECK(rel_frobenius_error(mpm, m) < 1e-5);
    CHECK(rel_frobenius_error(pmp, p) < 1e-5);
    const Matrix mp = matmul(m, p);
    const Matrix pm = matmul(p, m);
    CHECK(rel_frobenius_error(transpose(mp), mp) < 1e-5);
    CHECK(rel_frobenius_error(transpose(pm), pm) < 1e-5);
}
} // namespace

TEST_CASE("pseudo inverse satisfies Penrose identities on rank-deficient inputs") {
    const Matrix fixed(2, 2, {1, 0, 1, 0});
    check_penrose(fixed, pseudo_inverse(fixed));

    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        // random rank-2 matrix in a 6x5 frame
        const Matrix a = random_matrix(6, 2, 500 + seed);
        const Matrix b = random_matrix(2, 5, 600 + seed);
        const Matrix m = matmul(a, b);
        check_penrose(m, pseudo_inverse(m));
    }
}

TEST_SUITE_END();
