#include "crisp/losses.hpp"

#include <algorithm>
#include <cmath>

#include "crisp/errors.hpp"

namespace crisp {

void LossConfig::validate() const {
    if (!(beta > 0.0f)) throw ConfigError("LossConfig: beta must be > 0");
}

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "smooth_l1") return LossKind::smooth_l1;
    if (name == "huber") return LossKind::huber;
    if (name == "mse") return LossKind::mse;
    if (name == "l1") return LossKind::l1;
    throw ConfigError("unknown loss kind: " + name);
}

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::smooth_l1: return "smooth_l1";
        case LossKind::huber: return "huber";
        case LossKind::mse: return "mse";
        case LossKind::l1: return "l1";
    }
    return "?";
}

namespace {
inline double sign(double d) { return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0); }
} // namespace

LossResult loss_and_grad(const Matrix& pred, const Matrix& target, const LossConfig& cfg) {
    if (!pred.same_shape(target)) {
        throw ShapeError("loss_and_grad: " + pred.shape_str() + " vs " + target.shape_str());
    }
    cfg.validate();
    const double beta = cfg.beta;
    const double n = static_cast<double>(pred.size());
    LossResult out;
    out.grad = Matrix(pred.rows, pred.cols);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = static_cast<double>(pred.data[i]) - target.data[i];
        const double ad = std::abs(d);
        double value = 0.0, grad = 0.0;
        switch (cfg.kind) {
            case LossKind::smooth_l1:
                if (ad < beta) {
                    value = 0.5 * d * d / beta;
                    grad = d / beta;
                } else {
                    value = ad - 0.5 * beta;
                    grad = sign(d);
                }
                break;
            case LossKind::huber:
                if (ad < beta) {
                    value = 0.5 * d * d;
                    grad = d;
                } else {
                    value = beta * (ad - 0.5 * beta);
                    grad = beta * sign(d);
                }
                break;
            case LossKind::mse:
                value = d * d;
                grad = 2.0 * d;
                break;
            case LossKind::l1:
                value = ad;
                grad = sign(d);
                break;
        }
        acc += value;
        out.grad.data[i] = static_cast<float>(grad / n);
    }
    out.value = acc / n;
    return out;
}

Matrix softmax(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        double mx = -1e300;
        for (std::size_t j = 0; j < logits.cols; ++j)
            mx = std::max(mx, static_cast<double>(logits.at(i, j)));
        double denom = 0.0;
        for (std::size_t j = 0; j < logits.cols; ++j)
            denom += std::exp(static_cast<double>(logits.at(i, j)) - mx);
        for (std::size_t j = 0; j < logits.cols; ++j)
            out.at(i, j) =
                static_cast<float>(std::exp(static_cast<double>(logits.at(i, j)) - mx) / denom);
    }
    return out;
}

LossResult cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
    if (labels.size() != logits.rows) {
        throw ShapeError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(logits.rows) + " rows");
    }
    for (int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= logits.cols) {
            throw ConfigError("cross_entropy: label " + std::to_string(y) + " out of range [0, " +
                              std::to_string(logits.cols) + ")");
        }
    }
    const double batch = static_cast<double>(logits.rows);
    LossResult out;
    out.grad = Matrix(logits.rows, logits.cols);
    double acc = 0.0;
    for (std::size_t i = 0; i < logits.rows; ++i) {
        double mx = -1e300;
        for (std::size_t j = 0; j < logits.cols; ++j)
            mx = std::max(mx, static_cast<double>(logits.at(i, j)));
        double denom = 0.0;
        for (std::size_t j = 0; j < logits.cols; ++j)
            denom += std::exp(static_cast<double>(logits.at(i, j)) - mx);
        const auto y = static_cast<std::size_t>(labels[i]);
        acc += -(static_cast<double>(logits.at(i, y)) - mx - std::log(denom));
        for (std::size_t j = 0; j < logits.cols; ++j) {
            const double p = std::exp(static_cast<double>(logits.at(i, j)) - mx) / denom;
            out.grad.at(i, j) = static_cast<float>((p - (j == y ? 1.0 : 0.0)) / batch);
        }
    }
    out.value = acc / batch;
    return out;
}

LossResult kl_divergence(const Matrix& student_logits, const Matrix& teacher_logits) {
    if (!student_logits.same_shape(teacher_logits)) {
        throw ShapeError("kl_divergence: " + student_logits.shape_str() + " vs " +
                         teacher_logits.shape_str());
    }
    const double batch = static_cast<double>(student_logits.rows);
    const std::size_t cols = student_logits.cols;
    LossResult out;
    out.grad = Matrix(student_logits.rows, cols);
    double acc = 0.0;
    std::vector<double> log_p(cols), log_q(cols), p(cols);
    for (std::size_t i = 0; i < student_logits.rows; ++i) {
        auto row_log_softmax = [cols](const Matrix& m, std::size_t row, std::vector<double>& dst) {
            double mx = -1e300;
            for (std::size_t j = 0; j < cols; ++j)
                mx = std::max(mx, static_cast<double>(m.at(row, j)));
            double denom = 0.0;
            for (std::size_t j = 0; j < cols; ++j)
                denom += std::exp(static_cast<double>(m.at(row, j)) - mx);
            const double log_denom = std::log(denom);
            for (std::size_t j = 0; j < cols; ++j)
                dst[j] = static_cast<double>(m.at(row, j)) - mx - log_denom;
        };
        row_log_softmax(student_logits, i, log_p);
        row_log_softmax(teacher_logits, i, log_q);
        double row_kl = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            p[j] = std::exp(log_p[j]);
            row_kl += p[j] * (log_p[j] - log_q[j]);
        }
        acc += row_kl;
        // d/dz_i sum_j p_j (log p_j - log q_j) = p_i ((log p_i - log q_i) - KL)
        for (std::size_t j = 0; j < cols; ++j) {
            out.grad.at(i, j) =
                static_cast<float>(p[j] * ((log_p[j] - log_q[j]) - row_kl) / batch);
        }
    }
    out.value = acc / batch;
    return out;
}

} // namespace crisp
