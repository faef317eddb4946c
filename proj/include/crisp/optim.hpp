#pragma once

#include <cstddef>
#include <vector>

#include "crisp/matrix.hpp"

namespace crisp {

enum class OptimizerKind { adam, sgd };

/// Per-tensor Adam moments (f64, bias-corrected).
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t t = 0;

    void step(Matrix& param, const Matrix& grad, double lr, double beta1 = 0.9,
              double beta2 = 0.999, double eps = 1e-8);
};

void sgd_step(Matrix& param, const Matrix& grad, double lr);

} // namespace crisp
