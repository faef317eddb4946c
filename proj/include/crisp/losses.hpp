#pragma once

#include <vector>

#include "crisp/matrix.hpp"

namespace crisp {

enum class LossKind { smooth_l1, huber, mse, l1 };

struct LossConfig {
    LossKind kind = LossKind::smooth_l1;
    float beta = 1.0f; // transition point for smooth_l1 / huber

    void validate() const;
};

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

struct LossResult {
    double value = 0.0;
    Matrix grad; // d value / d pred, same shape as pred
};

/// Mean-reduced elementwise loss between pred and target, plus its gradient
/// w.r.t. pred. smooth_l1 per element: 0.5*d^2/beta for |d| < beta, else
/// |d| - 0.5*beta, with d = pred - target.
LossResult loss_and_grad(const Matrix& pred, const Matrix& target, const LossConfig& cfg);

/// Softmax cross-entropy, mean over batch rows. labels[i] indexes a column.
LossResult cross_entropy(const Matrix& logits, const std::vector<int>& labels);

/// KL(softmax(student) || softmax(teacher)), mean over batch rows; gradient
/// w.r.t. the student logits.
LossResult kl_divergence(const Matrix& student_logits, const Matrix& teacher_logits);

/// Row-wise softmax (f64 internal, max-shifted).
Matrix softmax(const Matrix& logits);

} // namespace crisp
