#include "crisp/synthetic.hpp"

#include <cmath>

#include "crisp/errors.hpp"
#include "crisp/rng.hpp"

namespace crisp {

TaskGenerator task_generator_from_string(const std::string& name) {
    if (name == "gaussian_blobs") return TaskGenerator::gaussian_blobs;
    if (name == "concentric_rings") return TaskGenerator::concentric_rings;
    throw ConfigError("unknown task generator: " + name);
}

std::string to_string(TaskGenerator g) {
    switch (g) {
        case TaskGenerator::gaussian_blobs: return "gaussian_blobs";
        case TaskGenerator::concentric_rings: return "concentric_rings";
    }
    return "?";
}

void SyntheticTask::validate() const {
    if (classes < 2) throw ConfigError("SyntheticTask: need at least 2 classes");
    if (dim < 2) throw ConfigError("SyntheticTask: need dim >= 2");
    if (train_size == 0 || test_size == 0) throw ConfigError("SyntheticTask: empty split");
    if (noise < 0.0) throw ConfigError("SyntheticTask: negative noise");
    if (generator == TaskGenerator::gaussian_blobs && classes > dim) {
        throw ConfigError("SyntheticTask: gaussian_blobs needs classes <= dim");
    }
}

namespace {

constexpr double kBlobRadius = 3.0;

// Orthonormal class directions (gaussian draw + Gram-Schmidt) so blob centers
// stay pairwise distant for every seed.
std::vector<std::vector<double>> blob_centers(std::size_t classes, std::size_t dim, Rng& rng) {
    std::vector<std::vector<double>> centers(classes, std::vector<double>(dim));
    for (std::size_t c = 0; c < classes; ++c) {
        auto& v = centers[c];
        while (true) {
            for (auto& x : v) x = rng.gaussian();
            for (std::size_t p = 0; p < c; ++p) {
                double proj = 0.0;
                for (std::size_t j = 0; j < dim; ++j) proj += v[j] * centers[p][j];
                for (std::size_t j = 0; j < dim; ++j) v[j] -= proj * centers[p][j];
            }
            double norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > 1e-6) {
                for (auto& x : v) x = x / norm * kBlobRadius;
                break;
            }
        }
    }
    return centers;
}

Dataset draw_split(const SyntheticTask& spec, std::size_t count,
                   const std::vector<std::vector<double>>& centers, Rng& rng) {
    Dataset out;
    out.x = Matrix(count, spec.dim);
    out.y.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t label = rng.uniform_index(spec.classes);
        out.y[i] = static_cast<int>(label);
        switch (spec.generator) {
            case TaskGenerator::gaussian_blobs:
                for (std::size_t j = 0; j < spec.dim; ++j) {
                    out.x.at(i, j) = static_cast<float>(centers[label][j] +
                                                        spec.noise * rng.gaussian());
                }
                break;
            case TaskGenerator::concentric_rings: {
                // radius per class, direction uniform on the sphere
                std::vector<double> dir(spec.dim);
                double norm = 0.0;
                for (auto& x : dir) {
                    x = rng.gaussian();
                    norm += x * x;
                }
                norm = std::max(std::sqrt(norm), 1e-12);
                const double radius =
                    (static_cast<double>(label) + 1.0) * 2.0 + spec.noise * rng.gaussian();
                for (std::size_t j = 0; j < spec.dim; ++j)
                    out.x.at(i, j) = static_cast<float>(dir[j] / norm * radius);
                break;
            }
        }
    }
    return out;
}

void apply_shift(Dataset& ds, const TaskShift& shift, std::size_t classes) {
    if (shift.rotation != 0.0) {
        const double c = std::cos(shift.rotation);
        const double s = std::sin(shift.rotation);
        for (std::size_t i = 0; i < ds.x.rows; ++i) {
            const double x0 = ds.x.at(i, 0);
            const double x1 = ds.x.at(i, 1);
            ds.x.at(i, 0) = static_cast<float>(c * x0 - s * x1);
            ds.x.at(i, 1) = static_cast<float>(s * x0 + c * x1);
        }
    }
    if (shift.remap != 0) {
        for (int& y : ds.y)
            y = static_cast<int>((static_cast<std::size_t>(y) + shift.remap) % classes);
    }
}

} // namespace

TaskData make_task(const SyntheticTask& spec, bool shifted) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, "task"));
    const auto centers = spec.generator == TaskGenerator::gaussian_blobs
                             ? blob_centers(spec.classes, spec.dim, rng)
                             : std::vector<std::vector<double>>();
    TaskData data;
    data.train = draw_split(spec, spec.train_size, centers, rng);
    data.val = draw_split(spec, spec.val_size, centers, rng);
    data.test = draw_split(spec, spec.test_size, centers, rng);
    if (shifted) {
        apply_shift(data.train, spec.shift, spec.classes);
        apply_shift(data.val, spec.shift, spec.classes);
        apply_shift(data.test, spec.shift, spec.classes);
    }
    return data;
}

} // namespace crisp
