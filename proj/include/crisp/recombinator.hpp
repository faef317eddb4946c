#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crisp/matrix.hpp"

namespace crisp {

// Where the constraint is applied when generating a weight:
//   pre  -> reshape(B * gate(A))      (the default formulation)
//   post -> act(reshape(B * A))
//   temp -> reshape(B * act(A))
//   none -> reshape(B * A)
enum class GatePlacement { pre, post, temp, none };
enum class GateActivation { silu_gate, relu, gelu, none };

struct GateConfig {
    GatePlacement placement = GatePlacement::pre;
    GateActivation activation = GateActivation::silu_gate;
};

GatePlacement placement_from_string(const std::string& name);
GateActivation activation_from_string(const std::string& name);
std::string to_string(GatePlacement p);
std::string to_string(GateActivation a);

/// Basis/mixer shapes for one layer (or one group of same-shaped layers):
/// basis is u x r with u = d_in*d_out / s, mixer is r x s.
struct FactorizationConfig {
    std::size_t r = 1;
    std::size_t s = 1;
    std::size_t d_in = 0;
    std::size_t d_out = 0;

    std::size_t basis_rows() const { return d_in * d_out / s; } // u
    void validate(const std::string& context = "") const;
};

struct GatePair {
    Matrix value; // gated matrix
    Matrix deriv; // element-wise derivative
};

/// Element-wise gate and its derivative. silu_gate(x) = x * sigmoid(x);
/// relu/gelu/none apply the plain function.
GatePair gate(const Matrix& a, const GateConfig& cfg);

/// Value of the single-element gate (f64), for callers that invert it.
double gate_scalar(double x, GateActivation act);

/// Start of the monotone region and the function minimum of an activation;
/// used when numerically inverting the gate.
struct GateMonotonicity {
    double argmin;
    double min_value;
};
GateMonotonicity gate_monotonicity(GateActivation act);

/// W = coefficient-gated recombination of basis (u x r) and mixer (r x s),
/// reshaped row-major into (d_out, d_in).
Matrix generate_weight(const Matrix& basis, const Matrix& mixer, const FactorizationConfig& cfg,
                       const GateConfig& gate_cfg);

struct LayerGrads {
    Matrix basis; // u x r
    Matrix mixer; // r x s
};

/// Gradients of a scalar loss w.r.t. basis and mixer given dL/dW.
LayerGrads layer_backward(const Matrix& dl_dw, const Matrix& basis, const Matrix& mixer,
                          const FactorizationConfig& cfg, const GateConfig& gate_cfg);

/// B*A + W_p (the additive low-rank update baseline).
Matrix lora_weight(const Matrix& pretrained, const Matrix& b, const Matrix& a);

/// K coefficient vectors of length r, averaged: (1/K) sum_j B* a_j.
struct RecastConfig {
    std::vector<std::vector<float>> coefficients;
};
Matrix recast_weight(const Matrix& flat_basis, const RecastConfig& cfg, std::size_t d_out,
                     std::size_t d_in);

/// B*A with B (d_out x r) shared across layers.
Matrix basis_sharing_weight(const Matrix& b, const Matrix& a);

struct TruncatedSvd {
    Matrix u;             // d_out x k
    std::vector<float> s; // k
    Matrix v;             // d_in x k

    Matrix reconstruct() const;
};
TruncatedSvd svd_truncate(const Matrix& w, std::size_t k);

struct ParamCount {
    std::size_t total;               // bases + mixers (biases counted by caller)
    std::size_t trainable_per_layer; // r*s
};
ParamCount param_count(const FactorizationConfig& cfg, std::size_t layers_per_group,
                       std::size_t num_groups);

} // namespace crisp
