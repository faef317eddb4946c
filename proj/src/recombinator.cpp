#include "crisp/recombinator.hpp"

#include <cmath>
#include <numbers>

#include "crisp/errors.hpp"
#include "crisp/svd.hpp"

namespace crisp {

GatePlacement placement_from_string(const std::string& name) {
    if (name == "pre") return GatePlacement::pre;
    if (name == "post") return GatePlacement::post;
    if (name == "temp") return GatePlacement::temp;
    if (name == "none") return GatePlacement::none;
    throw ConfigError("unknown gate placement: " + name);
}

GateActivation activation_from_string(const std::string& name) {
    if (name == "silu_gate") return GateActivation::silu_gate;
    if (name == "relu") return GateActivation::relu;
    if (name == "gelu") return GateActivation::gelu;
    if (name == "none") return GateActivation::none;
    throw ConfigError("unknown gate activation: " + name);
}

std::string to_string(GatePlacement p) {
    switch (p) {
        case GatePlacement::pre: return "pre";
        case GatePlacement::post: return "post";
        case GatePlacement::temp: return "temp";
        case GatePlacement::none: return "none";
    }
    return "?";
}

std::string to_string(GateActivation a) {
    switch (a) {
        case GateActivation::silu_gate: return "silu_gate";
        case GateActivation::relu: return "relu";
        case GateActivation::gelu: return "gelu";
        case GateActivation::none: return "none";
    }
    return "?";
}

void FactorizationConfig::validate(const std::string& context) const {
    const std::string where = context.empty() ? std::string() : (context + ": ");
    if (r < 1 || s < 1) throw ConfigError(where + "r and s must be >= 1");
    if (d_in == 0 || d_out == 0) throw ConfigError(where + "layer dimensions must be positive");
    if ((d_in * d_out) % s != 0) {
        throw ConfigError(where + "s=" + std::to_string(s) + " does not divide d_in*d_out=" +
                          std::to_string(d_in * d_out));
    }
}

namespace {

constexpr double kGeluC = 0.7978845608028654; // sqrt(2/pi)
constexpr double kGeluK = 0.044715;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double act_value(double x, GateActivation act) {
    switch (act) {
        case GateActivation::silu_gate: return x * sigmoid(x);
        case GateActivation::relu: return x > 0.0 ? x : 0.0;
        case GateActivation::gelu: {
            const double t = std::tanh(kGeluC * (x + kGeluK * x * x * x));
            return 0.5 * x * (1.0 + t);
        }
        case GateActivation::none: return x;
    }
    return x;
}

inline double act_deriv(double x, GateActivation act) {
    switch (act) {
        case GateActivation::silu_gate: {
            const double sg = sigmoid(x);
            return sg * (1.0 + x * (1.0 - sg));
        }
        case GateActivation::relu: return x > 0.0 ? 1.0 : 0.0;
        case GateActivation::gelu: {
            const double inner = kGeluC * (x + kGeluK * x * x * x);
            const double t = std::tanh(inner);
            const double dinner = kGeluC * (1.0 + 3.0 * kGeluK * x * x);
            return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * dinner;
        }
        case GateActivation::none: return 1.0;
    }
    return 1.0;
}

void check_factor_shapes(const Matrix& basis, const Matrix& mixer,
                         const FactorizationConfig& cfg) {
    cfg.validate();
    const std::size_t u = cfg.basis_rows();
    if (basis.rows != u || basis.cols != cfg.r) {
        throw ShapeError("basis is " + basis.shape_str() + ", expected " + std::to_string(u) +
                         "x" + std::to_string(cfg.r));
    }
    if (mixer.rows != cfg.r || mixer.cols != cfg.s) {
        throw ShapeError("mixer is " + mixer.shape_str() + ", expected " + std::to_string(cfg.r) +
                         "x" + std::to_string(cfg.s));
    }
}

} // namespace

double gate_scalar(double x, GateActivation act) { return act_value(x, act); }

GateMonotonicity gate_monotonicity(GateActivation act) {
    switch (act) {
        case GateActivation::relu: return {0.0, 0.0};
        case GateActivation::none: return {-1e30, -1e30};
        default: break;
    }
    // Bisection on the derivative over [-3, 0]; silu_gate and gelu both have a
    // single interior minimum there.
    double lo = -3.0, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (act_deriv(mid, act) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double argmin = 0.5 * (lo + hi);
    return {argmin, act_value(argmin, act)};
}

GatePair gate(const Matrix& a, const GateConfig& cfg) {
    GatePair out;
    out.value = Matrix(a.rows, a.cols);
    out.deriv = Matrix(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a.data[i];
        out.value.data[i] = static_cast<float>(act_value(x, cfg.activation));
        out.deriv.data[i] = static_cast<float>(act_deriv(x, cfg.activation));
    }
    return out;
}

Matrix generate_weight(const Matrix& basis, const Matrix& mixer, const FactorizationConfig& cfg,
                       const GateConfig& gate_cfg) {
    check_factor_shapes(basis, mixer, cfg);
    switch (gate_cfg.placement) {
        case GatePlacement::pre:
        case GatePlacement::temp: {
            const GatePair g = gate(mixer, gate_cfg);
            return reshaped(matmul(basis, g.value), cfg.d_out, cfg.d_in);
        }
        case GatePlacement::post: {
            Matrix w = reshaped(matmul(basis, mixer), cfg.d_out, cfg.d_in);
            for (float& x : w.data)
                x = static_cast<float>(act_value(x, gate_cfg.activation));
            return w;
        }
        case GatePlacement::none:
            return reshaped(matmul(basis, mixer), cfg.d_out, cfg.d_in);
    }
    throw ConfigError("generate_weight: bad placement");
}

LayerGrads layer_backward(const Matrix& dl_dw, const Matrix& basis, const Matrix& mixer,
                          const FactorizationConfig& cfg, const GateConfig& gate_cfg) {
    check_factor_shapes(basis, mixer, cfg);
    if (dl_dw.rows != cfg.d_out || dl_dw.cols != cfg.d_in) {
        throw ShapeError("layer_backward: dL/dW is " + dl_dw.shape_str() + ", expected " +
                         std::to_string(cfg.d_out) + "x" + std::to_string(cfg.d_in));
    }
    const std::size_t u = cfg.basis_rows();
    LayerGrads out;
    switch (gate_cfg.placement) {
        case GatePlacement::pre:
        case GatePlacement::temp: {
            const GatePair g = gate(mixer, gate_cfg);
            const Matrix grad_us = reshaped(dl_dw, u, cfg.s);
            out.basis = matmul(grad_us, transpose(g.value));
            out.mixer = hadamard(matmul(transpose(basis), grad_us), g.deriv);
            break;
        }
        case GatePlacement::post: {
            const Matrix pre_act = reshaped(matmul(basis, mixer), cfg.d_out, cfg.d_in);
            Matrix grad_w = dl_dw;
            for (std::size_t i = 0; i < grad_w.size(); ++i) {
                grad_w.data[i] = static_cast<float>(
                    static_cast<double>(grad_w.data[i]) *
                    act_deriv(pre_act.data[i], gate_cfg.activation));
            }
            const Matrix grad_us = reshaped(grad_w, u, cfg.s);
            out.basis = matmul(grad_us, transpose(mixer));
            out.mixer = matmul(transpose(basis), grad_us);
            break;
        }
        case GatePlacement::none: {
            const Matrix grad_us = reshaped(dl_dw, u, cfg.s);
            out.basis = matmul(grad_us, transpose(mixer));
            out.mixer = matmul(transpose(basis), grad_us);
            break;
        }
    }
    return out;
}

Matrix lora_weight(const Matrix& pretrained, const Matrix& b, const Matrix& a) {
    if (b.cols != a.rows || b.rows != pretrained.rows || a.cols != pretrained.cols) {
        throw ShapeError("lora_weight: W_p " + pretrained.shape_str() + ", B " + b.shape_str() +
                         ", A " + a.shape_str());
    }
    return add(matmul(b, a), pretrained);
}

Matrix recast_weight(const Matrix& flat_basis, const RecastConfig& cfg, std::size_t d_out,
                     std::size_t d_in) {
    const std::size_t kcount = cfg.coefficients.size();
    if (kcount == 0) throw ConfigError("recast_weight: K must be >= 1");
    if (flat_basis.rows != d_in * d_out) {
        throw ShapeError("recast_weight: basis rows " + std::to_string(flat_basis.rows) +
                         " != d_in*d_out " + std::to_string(d_in * d_out));
    }
    const std::size_t r = flat_basis.cols;
    std::vector<double> acc(flat_basis.rows, 0.0);
    for (const auto& coeff : cfg.coefficients) {
        if (coeff.size() != r) {
            throw ShapeError("recast_weight: coefficient length " + std::to_string(coeff.size()) +
                             " != r " + std::to_string(r));
        }
        const Matrix column = matmul(flat_basis, Matrix(r, 1, coeff));
        for (std::size_t i = 0; i < column.size(); ++i) acc[i] += column.data[i];
    }
    Matrix w(d_out, d_in);
    for (std::size_t i = 0; i < w.size(); ++i)
        w.data[i] = static_cast<float>(acc[i] / static_cast<double>(kcount));
    return w;
}

Matrix basis_sharing_weight(const Matrix& b, const Matrix& a) {
    return matmul(b, a);
}

Matrix TruncatedSvd::reconstruct() const {
    Matrix us = u;
    for (std::size_t i = 0; i < us.rows; ++i)
        for (std::size_t j = 0; j < us.cols; ++j)
            us.at(i, j) = static_cast<float>(static_cast<double>(us.at(i, j)) * s[j]);
    return matmul(us, transpose(v));
}

TruncatedSvd svd_truncate(const Matrix& w, std::size_t k) {
    if (k < 1 || k > std::min(w.rows, w.cols)) {
        throw ConfigError("svd_truncate: k=" + std::to_string(k) + " out of range for " +
                          w.shape_str());
    }
    const SvdResult f = svd(w);
    TruncatedSvd out;
    out.u = Matrix(w.rows, k);
    out.v = Matrix(w.cols, k);
    out.s.assign(f.s.begin(), f.s.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < w.rows; ++i)
        for (std::size_t j = 0; j < k; ++j) out.u.at(i, j) = f.u.at(i, j);
    for (std::size_t i = 0; i < w.cols; ++i)
        for (std::size_t j = 0; j < k; ++j) out.v.at(i, j) = f.v.at(i, j);
    return out;
}

ParamCount param_count(const FactorizationConfig& cfg, std::size_t layers_per_group,
                       std::size_t num_groups) {
    cfg.validate();
    ParamCount out;
    out.trainable_per_layer = cfg.r * cfg.s;
    out.total = num_groups * cfg.basis_rows() * cfg.r +
                num_groups * layers_per_group * cfg.r * cfg.s;
    return out;
}

} // namespace crisp
