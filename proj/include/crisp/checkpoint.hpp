#pragma once

#include <vector>

#include "crisp/factor_bank.hpp"
#include "crisp/matrix.hpp"

namespace crisp {

/// A dense layer stack: the source a retrofit mimics.
struct CheckpointLayer {
    LayerDescriptor desc;
    Matrix weight;           // d_out x d_in
    std::vector<float> bias; // d_out
};

struct Checkpoint {
    std::vector<CheckpointLayer> layers;

    const CheckpointLayer* find(std::size_t layer_id) const {
        for (const auto& l : layers)
            if (l.desc.id == layer_id) return &l;
        return nullptr;
    }
};

} // namespace crisp
