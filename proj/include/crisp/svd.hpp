#pragma once

#include <vector>

#include "crisp/matrix.hpp"

namespace crisp {

/// Thin SVD m = u * diag(s) * v^T with k = min(rows, cols) columns.
/// Singular values are non-increasing; the largest-magnitude entry of each
/// u-column is positive.
struct SvdResult {
    Matrix u;             // rows x k
    std::vector<float> s; // k, descending, >= 0
    Matrix v;             // cols x k

    Matrix reconstruct() const;
};

/// Jacobi eigendecomposition of the Gram matrix of the smaller dimension.
/// Throws NumericError if the sweep cap (100) is hit before the off-diagonal
/// norm drops below 1e-10.
SvdResult svd(const Matrix& m);

/// Moore-Penrose inverse via svd; singular values below rcond * s_max are
/// treated as zero.
Matrix pseudo_inverse(const Matrix& m, float rcond = 1e-6f);

} // namespace crisp
