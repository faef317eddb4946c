#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace crisp {

/// Dense 2-D matrix of f32, row-major. All reductions and products
/// accumulate in f64 and round once on store.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data; // rows*cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, float fill = 0.0f)
        : rows(r), cols(c), data(r * c, fill) {}
    Matrix(std::size_t r, std::size_t c, std::vector<float> values);

    float& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    float at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::size_t size() const { return rows * cols; }
    bool empty() const { return data.empty(); }

    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }

    std::string shape_str() const;
};

bool operator==(const Matrix& a, const Matrix& b);

Matrix identity(std::size_t n);

/// a*b with f64 accumulation. Throws ShapeError on inner-dim mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double c);
Matrix hadamard(const Matrix& a, const Matrix& b);

/// Same buffer, new shape; element count must match.
Matrix reshaped(const Matrix& m, std::size_t rows, std::size_t cols);

double frobenius_norm(const Matrix& m);
double dot(const Matrix& a, const Matrix& b);

/// ||approx - reference||_F / ||reference||_F (0 denominator -> absolute norm).
double rel_frobenius_error(const Matrix& approx, const Matrix& reference);

bool all_finite(const Matrix& m);
bool all_finite(std::span<const float> v);

/// Throws NumericError naming `what` if m contains NaN/Inf.
void require_finite(const Matrix& m, const std::string& what);

} // namespace crisp
