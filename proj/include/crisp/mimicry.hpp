#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crisp/checkpoint.hpp"
#include "crisp/factor_bank.hpp"
#include "crisp/losses.hpp"
#include "crisp/optim.hpp"

namespace crisp {

enum class InitScheme { gaussian_0p01, uniform, kaiming, xavier, orthogonal };

InitScheme init_scheme_from_string(const std::string& name);
std::string to_string(InitScheme scheme);

struct StepScheduler {
    double factor = 0.5;
    std::size_t period = 2000; // steps between decays

    double lr_at(double base_lr, std::size_t step) const;
};

struct MimicryConfig {
    LossConfig loss;
    InitScheme init = InitScheme::orthogonal; // mixer init; bases always N(0, 0.01)
    double lr = 0.01;
    StepScheduler scheduler;
    std::size_t max_steps = 10000;
    double target_rel_error = 1e-2; // per layer, relative Frobenius
    OptimizerKind optimizer = OptimizerKind::adam;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Chunk consecutive same-kind layers into groups of group_size (the last
/// group of a kind may be smaller). Kinds never mix. Matrices stay empty
/// until init_factors.
std::vector<LayerGroup> group_layers(std::span<const LayerDescriptor> layers,
                                     std::size_t group_size);

/// Fill bases and mixers per the configured scheme from the seed; biases are
/// copied from the source checkpoint when given, else zero.
FactorBank init_factors(std::vector<LayerGroup> groups, std::size_t r, std::size_t s,
                        const GateConfig& gate, const MimicryConfig& cfg,
                        const Checkpoint* source = nullptr);

struct RetrofitRecord {
    std::size_t step;
    std::size_t group;
    double loss;
    double rel_error; // max over group members
};

struct RetrofitResult {
    std::vector<RetrofitRecord> history; // one record per step per group
    bool converged = false;
    std::vector<double> final_rel_error; // per group (max over members)
    std::size_t steps = 0;
};

/// Data-free gradient descent on sum_i loss(generate_weight_i - W_p_i).
/// Stops at the target relative error or max_steps. Throws NumericError on
/// NaN (with the step index) or sustained divergence.
RetrofitResult retrofit(const Checkpoint& pretrained, FactorBank& bank,
                        const MimicryConfig& cfg);

} // namespace crisp
