#include "crisp/factor_bank.hpp"

#include <set>

#include "crisp/errors.hpp"

namespace crisp {

std::optional<FactorBank::Slot> FactorBank::find(std::size_t layer_id) const {
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t m = 0; m < groups[g].members.size(); ++m) {
            if (groups[g].members[m] == layer_id) return Slot{g, m};
        }
    }
    return std::nullopt;
}

std::size_t FactorBank::layer_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.members.size();
    return n;
}

void FactorBank::validate() const {
    std::set<std::size_t> seen;
    for (const auto& g : groups) {
        const std::string where = "group " + std::to_string(g.id);
        if (g.members.empty()) throw ConfigError(where + ": no members");
        g.config.validate(where);
        const std::size_t u = g.config.basis_rows();
        if (g.basis.rows != u || g.basis.cols != g.config.r) {
            throw ShapeError(where + ": basis " + g.basis.shape_str() + ", expected " +
                             std::to_string(u) + "x" + std::to_string(g.config.r));
        }
        if (g.mixers.size() != g.members.size() || g.biases.size() != g.members.size()) {
            throw ShapeError(where + ": member count mismatch");
        }
        for (std::size_t m = 0; m < g.members.size(); ++m) {
            if (!seen.insert(g.members[m]).second) {
                throw ConfigError(where + ": layer " + std::to_string(g.members[m]) +
                                  " appears in more than one group");
            }
            if (g.mixers[m].rows != g.config.r || g.mixers[m].cols != g.config.s) {
                throw ShapeError(where + ": mixer " + g.mixers[m].shape_str() + ", expected " +
                                 std::to_string(g.config.r) + "x" + std::to_string(g.config.s));
            }
            if (g.biases[m].size() != g.config.d_out) {
                throw ShapeError(where + ": bias length " + std::to_string(g.biases[m].size()) +
                                 ", expected " + std::to_string(g.config.d_out));
            }
        }
    }
}

} // namespace crisp
