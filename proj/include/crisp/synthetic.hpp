#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crisp/matrix.hpp"

namespace crisp {

enum class TaskGenerator { gaussian_blobs, concentric_rings };

TaskGenerator task_generator_from_string(const std::string& name);
std::string to_string(TaskGenerator g);

/// Label-space remap + input rotation defining a shifted target task.
struct TaskShift {
    double rotation = 0.0;   // radians, applied in the first two input coordinates
    std::size_t remap = 0;   // cyclic label shift

    bool is_identity() const { return rotation == 0.0 && remap == 0; }
};

struct SyntheticTask {
    TaskGenerator generator = TaskGenerator::gaussian_blobs;
    std::size_t classes = 4;
    std::size_t dim = 16;
    double noise = 0.5;
    std::size_t train_size = 512;
    std::size_t val_size = 128;
    std::size_t test_size = 256;
    TaskShift shift; // applied only when make_task is asked for the shifted variant
    std::uint64_t seed = 0;

    void validate() const;
};

struct Dataset {
    Matrix x;           // n x dim
    std::vector<int> y; // n
};

struct TaskData {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Deterministic labeled splits (disjoint draws from one stream). The shifted
/// variant derives from the same seed with the shift applied afterwards.
TaskData make_task(const SyntheticTask& spec, bool shifted = false);

} // namespace crisp
