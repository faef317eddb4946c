#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crisp/matrix.hpp"
#include "crisp/recombinator.hpp"

namespace crisp {

/// One layer of a source model, as seen by the retrofit pipeline.
struct LayerDescriptor {
    std::size_t id = 0;     // unique across the model
    std::string kind;       // module kind tag; groups never mix kinds
    std::size_t index = 0;  // position within its kind
    std::size_t d_out = 0;
    std::size_t d_in = 0;
};

/// Consecutive same-kind layers sharing one basis.
struct LayerGroup {
    std::size_t id = 0;
    std::string kind;
    std::vector<std::size_t> members;      // layer ids
    FactorizationConfig config;            // r, s and the members' dimensions
    Matrix basis;                          // u x r, shared
    std::vector<Matrix> mixers;            // per member, r x s
    std::vector<std::vector<float>> biases; // per member, d_out (dense, copied)

    Matrix weight(std::size_t member, const GateConfig& gate_cfg) const {
        return generate_weight(basis, mixers[member], config, gate_cfg);
    }
};

/// The retrofitted model state: shared bases, per-layer mixers and biases.
struct FactorBank {
    GateConfig gate;
    std::vector<LayerGroup> groups;
    std::uint64_t source_hash = 0; // provenance: hash of the source checkpoint
    std::uint64_t seed = 0;

    struct Slot {
        std::size_t group;
        std::size_t member;
    };
    /// Locate a layer id; every id appears in exactly one group.
    std::optional<Slot> find(std::size_t layer_id) const;
    void validate() const;
    std::size_t layer_count() const;
};

} // namespace crisp
