#include "crisp/optim.hpp"

#include <cmath>

#include "crisp/errors.hpp"

namespace crisp {

void AdamState::step(Matrix& param, const Matrix& grad, double lr, double beta1, double beta2,
                     double eps) {
    if (!param.same_shape(grad)) {
        throw ShapeError("adam: param " + param.shape_str() + " vs grad " + grad.shape_str());
    }
    if (m.empty()) {
        m.assign(param.size(), 0.0);
        v.assign(param.size(), 0.0);
    }
    ++t;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad.data[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        const double update = lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        param.data[i] = static_cast<float>(static_cast<double>(param.data[i]) - update);
    }
}

void sgd_step(Matrix& param, const Matrix& grad, double lr) {
    if (!param.same_shape(grad)) {
        throw ShapeError("sgd: param " + param.shape_str() + " vs grad " + grad.shape_str());
    }
    for (std::size_t i = 0; i < param.size(); ++i) {
        param.data[i] =
            static_cast<float>(static_cast<double>(param.data[i]) - lr * grad.data[i]);
    }
}

} // namespace crisp
