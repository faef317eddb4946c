#pragma once

// Shared test helpers. The f64 oracle routines here are deliberately
// independent of the library code paths they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "crisp/matrix.hpp"
#include "crisp/rng.hpp"

namespace testsupport {

inline crisp::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                   double scale = 1.0) {
    crisp::Rng rng(seed);
    crisp::Matrix m(rows, cols);
    for (auto& x : m.data) x = static_cast<float>(rng.gaussian() * scale);
    return m;
}

// Naive triple-loop f64 product.
inline std::vector<double> oracle_matmul(const std::vector<double>& a,
                                         const std::vector<double>& b, std::size_t n,
                                         std::size_t k, std::size_t m) {
    std::vector<double> out(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t t = 0; t < k; ++t) out[i * m + j] += a[i * k + t] * b[t * m + j];
    return out;
}

inline std::vector<double> widen(const crisp::Matrix& m) {
    return std::vector<double>(m.data.begin(), m.data.end());
}

// Norm-wise relative error between an analytic gradient and an oracle.
inline double grad_rel_error(const crisp::Matrix& analytic, const std::vector<double>& oracle) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double d = static_cast<double>(analytic.data[i]) - oracle[i];
        num += d * d;
        den += oracle[i] * oracle[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

// Central finite differences of an f64 scalar function w.r.t. every entry of
// the f32 parameter matrix. `eval` must recompute the loss from scratch.
inline std::vector<double> finite_difference(crisp::Matrix& param,
                                             const std::function<double()>& eval,
                                             double h = 1e-3) {
    std::vector<double> grad(param.size());
    for (std::size_t i = 0; i < param.size(); ++i) {
        const float saved = param.data[i];
        param.data[i] = static_cast<float>(static_cast<double>(saved) + h);
        const double up = eval();
        param.data[i] = static_cast<float>(static_cast<double>(saved) - h);
        const double down = eval();
        param.data[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

} // namespace testsupport
