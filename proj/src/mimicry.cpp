#include "crisp/mimicry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "crisp/errors.hpp"
#include "crisp/rng.hpp"

namespace crisp {

InitScheme init_scheme_from_string(const std::string& name) {
    if (name == "gaussian_0p01") return InitScheme::gaussian_0p01;
    if (name == "uniform") return InitScheme::uniform;
    if (name == "kaiming") return InitScheme::kaiming;
    if (name == "xavier") return InitScheme::xavier;
    if (name == "orthogonal") return InitScheme::orthogonal;
    throw ConfigError("unknown init scheme: " + name);
}

std::string to_string(InitScheme scheme) {
    switch (scheme) {
        case InitScheme::gaussian_0p01: return "gaussian_0p01";
        case InitScheme::uniform: return "uniform";
        case InitScheme::kaiming: return "kaiming";
        case InitScheme::xavier: return "xavier";
        case InitScheme::orthogonal: return "orthogonal";
    }
    return "?";
}

double StepScheduler::lr_at(double base_lr, std::size_t step) const {
    if (period == 0) return base_lr;
    return base_lr * std::pow(factor, static_cast<double>(step / period));
}

void MimicryConfig::validate() const {
    loss.validate();
    if (!(lr > 0.0)) throw ConfigError("MimicryConfig: lr must be > 0");
    if (max_steps < 1) throw ConfigError("MimicryConfig: max_steps must be >= 1");
}

std::vector<LayerGroup> group_layers(std::span<const LayerDescriptor> layers,
                                     std::size_t group_size) {
    if (layers.empty()) throw ConfigError("group_layers: empty layer list");
    if (group_size < 1) throw ConfigError("group_layers: group_size must be >= 1");

    // kinds keep their first-appearance order; layers keep input order
    std::vector<std::string> kind_order;
    std::map<std::string, std::vector<const LayerDescriptor*>> by_kind;
    for (const auto& layer : layers) {
        if (by_kind.find(layer.kind) == by_kind.end()) kind_order.push_back(layer.kind);
        by_kind[layer.kind].push_back(&layer);
    }

    std::vector<LayerGroup> groups;
    for (const auto& kind : kind_order) {
        const auto& members = by_kind[kind];
        for (std::size_t start = 0; start < members.size(); start += group_size) {
            LayerGroup g;
            g.id = groups.size();
            g.kind = kind;
            const std::size_t end = std::min(start + group_size, members.size());
            for (std::size_t i = start; i < end; ++i) {
                const LayerDescriptor* d = members[i];
                if (!g.members.empty() &&
                    (d->d_in != g.config.d_in || d->d_out != g.config.d_out)) {
                    throw ConfigError("group_layers: kind '" + kind +
                                      "' mixes layer shapes; split kinds by shape");
                }
                g.config.d_in = d->d_in;
                g.config.d_out = d->d_out;
                g.members.push_back(d->id);
            }
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

namespace {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double stddev, Rng& rng) {
    Matrix m(rows, cols);
    for (auto& x : m.data) x = static_cast<float>(rng.gaussian() * stddev);
    return m;
}

// Modified Gram-Schmidt on the rows (rows <= cols) or columns (rows > cols)
// of a gaussian draw.
Matrix orthogonal_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    const bool on_rows = rows <= cols;
    const std::size_t k = on_rows ? rows : cols;
    const std::size_t len = on_rows ? cols : rows;
    std::vector<std::vector<double>> vecs(k, std::vector<double>(len));
    for (auto& v : vecs)
        for (auto& x : v) x = rng.gaussian();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double proj = 0.0;
            for (std::size_t t = 0; t < len; ++t) proj += vecs[i][t] * vecs[j][t];
            for (std::size_t t = 0; t < len; ++t) vecs[i][t] -= proj * vecs[j][t];
        }
        double norm = 0.0;
        for (double x : vecs[i]) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-9) { // essentially impossible for a gaussian draw
            for (auto& x : vecs[i]) x = rng.gaussian();
            --i;
            continue;
        }
        for (auto& x : vecs[i]) x /= norm;
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m.at(i, j) = static_cast<float>(on_rows ? vecs[i][j] : vecs[j][i]);
    return m;
}

Matrix init_mixer(std::size_t r, std::size_t s, InitScheme scheme, Rng& rng) {
    switch (scheme) {
        case InitScheme::gaussian_0p01: return gaussian_matrix(r, s, 0.01, rng);
        case InitScheme::uniform: {
            const double bound = std::sqrt(1.0 / static_cast<double>(s));
            Matrix m(r, s);
            for (auto& x : m.data) x = static_cast<float>(rng.uniform(-bound, bound));
            return m;
        }
        case InitScheme::kaiming:
            return gaussian_matrix(r, s, std::sqrt(2.0 / static_cast<double>(s)), rng);
        case InitScheme::xavier:
            return gaussian_matrix(r, s, std::sqrt(2.0 / static_cast<double>(r + s)), rng);
        case InitScheme::orthogonal: return orthogonal_matrix(r, s, rng);
    }
    throw ConfigError("init_mixer: bad scheme");
}

} // namespace

FactorBank init_factors(std::vector<LayerGroup> groups, std::size_t r, std::size_t s,
                        const GateConfig& gate, const MimicryConfig& cfg,
                        const Checkpoint* source) {
    cfg.validate();
    FactorBank bank;
    bank.gate = gate;
    bank.seed = cfg.seed;
    for (auto& g : groups) {
        g.config.r = r;
        g.config.s = s;
        g.config.validate("group " + std::to_string(g.id) + " (kind '" + g.kind + "', layer " +
                          (g.members.empty() ? std::string("?") : std::to_string(g.members[0])) +
                          ")");
        Rng rng(derive_seed(cfg.seed, "init/group/" + std::to_string(g.id)));
        g.basis = gaussian_matrix(g.config.basis_rows(), r, 0.01, rng);
        g.mixers.clear();
        g.biases.clear();
        for (std::size_t m = 0; m < g.members.size(); ++m) {
            g.mixers.push_back(init_mixer(r, s, cfg.init, rng));
            std::vector<float> bias(g.config.d_out, 0.0f);
            if (source != nullptr) {
                const CheckpointLayer* layer = source->find(g.members[m]);
                if (layer == nullptr) {
                    throw ConfigError("init_factors: layer " + std::to_string(g.members[m]) +
                                      " missing from source checkpoint");
                }
                bias = layer->bias;
            }
            g.biases.push_back(std::move(bias));
        }
        bank.groups.push_back(std::move(g));
    }
    bank.validate();
    return bank;
}

namespace {

struct GroupOptimState {
    AdamState basis;
    std::vector<AdamState> mixers;
};

} // namespace

RetrofitResult retrofit(const Checkpoint& pretrained, FactorBank& bank,
                        const MimicryConfig& cfg) {
    cfg.validate();
    // resolve targets up front; shapes must match the bank
    std::vector<std::vector<const Matrix*>> targets(bank.groups.size());
    for (std::size_t g = 0; g < bank.groups.size(); ++g) {
        const auto& group = bank.groups[g];
        for (std::size_t m = 0; m < group.members.size(); ++m) {
            const CheckpointLayer* layer = pretrained.find(group.members[m]);
            if (layer == nullptr) {
                throw ConfigError("retrofit: layer " + std::to_string(group.members[m]) +
                                  " missing from checkpoint");
            }
            if (layer->weight.rows != group.config.d_out ||
                layer->weight.cols != group.config.d_in) {
                throw ShapeError("retrofit: group " + std::to_string(group.id) + " layer " +
                                 std::to_string(group.members[m]) + ": checkpoint weight " +
                                 layer->weight.shape_str() + " vs config " +
                                 std::to_string(group.config.d_out) + "x" +
                                 std::to_string(group.config.d_in));
            }
            targets[g].push_back(&layer->weight);
        }
    }

    RetrofitResult result;
    result.final_rel_error.assign(bank.groups.size(), 0.0);
    std::vector<GroupOptimState> optim(bank.groups.size());
    for (std::size_t g = 0; g < bank.groups.size(); ++g)
        optim[g].mixers.resize(bank.groups[g].members.size());

    std::vector<char> group_done(bank.groups.size(), 0);
    std::vector<double> initial_loss(bank.groups.size(), 0.0);
    std::vector<std::size_t> diverged_streak(bank.groups.size(), 0);

    for (std::size_t step = 0; step < cfg.max_steps; ++step) {
        const double lr = cfg.scheduler.lr_at(cfg.lr, step);
        bool all_done = true;
        for (std::size_t g = 0; g < bank.groups.size(); ++g) {
            if (group_done[g]) continue; // converged groups stay untouched
            auto& group = bank.groups[g];

            // loss, gradients, and per-layer relative error for this group
            double loss = 0.0;
            double worst_rel = 0.0;
            Matrix basis_grad(group.basis.rows, group.basis.cols);
            std::vector<Matrix> mixer_grads;
            for (std::size_t m = 0; m < group.members.size(); ++m) {
                const Matrix generated = group.weight(m, bank.gate);
                const LossResult lr_m = loss_and_grad(generated, *targets[g][m], cfg.loss);
                loss += lr_m.value;
                worst_rel = std::max(worst_rel,
                                     rel_frobenius_error(generated, *targets[g][m]));
                const LayerGrads grads =
                    layer_backward(lr_m.grad, group.basis, group.mixers[m], group.config,
                                   bank.gate);
                basis_grad = add(basis_grad, grads.basis);
                mixer_grads.push_back(grads.mixer);
            }

            if (std::isnan(loss)) {
                throw NumericError("retrofit: NaN loss in group " + std::to_string(group.id) +
                                   " at step " + std::to_string(step));
            }
            result.history.push_back({step, group.id, loss, worst_rel});
            result.final_rel_error[g] = worst_rel;

            if (worst_rel < cfg.target_rel_error) {
                group_done[g] = 1;
                continue;
            }
            all_done = false;

            if (step == 0) initial_loss[g] = loss;
            if (loss > 10.0 * initial_loss[g] && initial_loss[g] > 0.0) {
                if (++diverged_streak[g] >= 100) {
                    throw NumericError("retrofit: group " + std::to_string(group.id) +
                                       " diverged (loss " + std::to_string(loss) + " > 10x initial for 100 steps)");
                }
            } else {
                diverged_streak[g] = 0;
            }

            if (cfg.optimizer == OptimizerKind::adam) {
                optim[g].basis.step(group.basis, basis_grad, lr);
                for (std::size_t m = 0; m < group.members.size(); ++m)
                    optim[g].mixers[m].step(group.mixers[m], mixer_grads[m], lr);
            } else {
                sgd_step(group.basis, basis_grad, lr);
                for (std::size_t m = 0; m < group.members.size(); ++m)
                    sgd_step(group.mixers[m], mixer_grads[m], lr);
            }
        }
        result.steps = step + 1;
        if (all_done) {
            result.converged = true;
            break;
        }
    }

    if (!result.converged) {
        result.converged = true;
        for (std::size_t g = 0; g < bank.groups.size(); ++g) {
            if (result.final_rel_error[g] >= cfg.target_rel_error) result.converged = false;
        }
    }
    return result;
}

} // namespace crisp
