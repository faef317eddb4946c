#include "crisp/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "crisp/errors.hpp"

namespace crisp {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<float> values)
    : rows(r), cols(c), data(std::move(values)) {
    if (data.size() != rows * cols) {
        throw ShapeError("Matrix: data length " + std::to_string(data.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

std::string Matrix::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0f;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw ShapeError("matmul: " + a.shape_str() + " * " + b.shape_str());
    }
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < b.cols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) {
                acc += static_cast<double>(a.data[i * a.cols + k]) *
                       static_cast<double>(b.data[k * b.cols + j]);
            }
            out.data[i * out.cols + j] = static_cast<float>(acc);
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            out.at(j, i) = m.at(i, j);
    return out;
}

namespace {
void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": " + a.shape_str() + " vs " + b.shape_str());
    }
}
} // namespace

Matrix add(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "add");
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data[i] = static_cast<float>(static_cast<double>(a.data[i]) + b.data[i]);
    return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "sub");
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data[i] = static_cast<float>(static_cast<double>(a.data[i]) - b.data[i]);
    return out;
}

Matrix scale(const Matrix& m, double c) {
    Matrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        out.data[i] = static_cast<float>(c * static_cast<double>(m.data[i]));
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "hadamard");
    Matrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data[i] = static_cast<float>(static_cast<double>(a.data[i]) * b.data[i]);
    return out;
}

Matrix reshaped(const Matrix& m, std::size_t rows, std::size_t cols) {
    if (rows * cols != m.size()) {
        throw ShapeError("reshape: " + m.shape_str() + " -> " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
    Matrix out = m;
    out.rows = rows;
    out.cols = cols;
    return out;
}

double frobenius_norm(const Matrix& m) {
    double acc = 0.0;
    for (float v : m.data) acc += static_cast<double>(v) * v;
    return std::sqrt(acc);
}

double dot(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += static_cast<double>(a.data[i]) * b.data[i];
    return acc;
}

double rel_frobenius_error(const Matrix& approx, const Matrix& reference) {
    check_same_shape(approx, reference, "rel_frobenius_error");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        const double d = static_cast<double>(approx.data[i]) - reference.data[i];
        num += d * d;
        den += static_cast<double>(reference.data[i]) * reference.data[i];
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

bool all_finite(std::span<const float> v) {
    for (float x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Matrix& m) { return all_finite(std::span<const float>(m.data)); }

void require_finite(const Matrix& m, const std::string& what) {
    if (!all_finite(m)) throw NumericError(what + ": non-finite entries");
}

} // namespace crisp
