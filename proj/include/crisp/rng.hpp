#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace crisp {

/// Deterministic RNG. Uniform/gaussian draws are derived from raw mt19937_64
/// output (not std distributions, whose sequences vary across standard
/// libraries), so a seed reproduces the same stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Index in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        std::size_t i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    /// Standard normal via Box-Muller (pairwise, second value cached).
    double gaussian();

private:
    std::mt19937_64 gen_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

/// Stable sub-seed for a named stream, so independent consumers of one
/// run seed never share state.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

} // namespace crisp
