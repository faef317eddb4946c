#include <doctest.h>

#include "crisp/errors.hpp"
#include "crisp/matrix.hpp"
#include "support.hpp"

using namespace crisp;
using testsupport::oracle_matmul;
using testsupport::random_matrix;
using testsupport::widen;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("matmul identity") {
    const Matrix m = random_matrix(2, 3, 7);
    const Matrix out = matmul(identity(2), m);
    CHECK(out == m);
}

TEST_CASE("matmul hand arithmetic") {
    const Matrix a(2, 2, {1, 2, 3, 4});
    const Matrix b(2, 1, {0, 1});
    const Matrix out = matmul(a, b);
    CHECK(out.at(0, 0) == doctest::Approx(2.0));
    CHECK(out.at(1, 0) == doctest::Approx(4.0));
}

TEST_CASE("matmul matches triple-loop oracle") {
    const Matrix a = random_matrix(8, 8, 11);
    const Matrix b = random_matrix(8, 8, 12);
    const auto oracle = oracle_matmul(widen(a), widen(b), 8, 8, 8);
    const Matrix out = matmul(a, b);
    for (std::size_t i = 0; i < out.size(); ++i)
        CHECK(std::abs(out.data[i] - oracle[i]) < 1e-6 * std::max(1.0, std::abs(oracle[i])));
}

TEST_CASE("matmul shape error") {
    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST_CASE("matmul associativity on random triples") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Matrix a = random_matrix(6, 4, 100 + seed);
        const Matrix b = random_matrix(4, 5, 200 + seed);
        const Matrix c = random_matrix(5, 3, 300 + seed);
        const Matrix left = matmul(matmul(a, b), c);
        const Matrix right = matmul(a, matmul(b, c));
        CHECK(rel_frobenius_error(left, right) < 1e-4);
    }
}

TEST_CASE("reshape preserves buffer") {
    const Matrix m = random_matrix(4, 6, 3);
    const Matrix r = reshaped(m, 8, 3);
    CHECK(r.data == m.data);
    CHECK_THROWS_AS(reshaped(m, 5, 5), ShapeError);
}

TEST_CASE("finiteness check") {
    Matrix m(2, 2, {1.0f, 2.0f, 3.0f, 4.0f});
    CHECK(all_finite(m));
    m.at(1, 1) = std::numeric_limits<float>::quiet_NaN();
    CHECK(!all_finite(m));
    CHECK_THROWS_AS(require_finite(m, "test"), NumericError);
}

TEST_SUITE_END();
