#include "crisp/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "crisp/errors.hpp"

namespace crisp {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-10;

double sign_copy(double x) { return x >= 0.0 ? 1.0 : -1.0; }

// Cyclic Jacobi on a symmetric matrix (f64, column-major irrelevant: square
// dense). On return `a` is near-diagonal and `vecs` holds eigenvectors in
// columns.
void jacobi_eigen(std::vector<double>& a, std::vector<double>& vecs, std::size_t n) {
    vecs.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) vecs[i * n + i] = 1.0;
    if (n < 2) return;

    auto off_diag_norm = [&]() {
        double acc = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) acc += a[p * n + q] * a[p * n + q];
        return std::sqrt(acc);
    };
    const double scale = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
    const double tol = kOffDiagTol * std::max(scale, 1.0);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diag_norm() <= tol) return;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) <= tol / static_cast<double>(n)) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = sign_copy(theta) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vecs[k * n + p];
                    const double vkq = vecs[k * n + q];
                    vecs[k * n + p] = c * vkp - s * vkq;
                    vecs[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    const double residual = off_diag_norm();
    if (residual > tol) {
        throw NumericError("svd: Jacobi sweeps exhausted, off-diagonal residual " +
                           std::to_string(residual));
    }
}

// Gram-Schmidt completion: make column `col` of `m` (n x k, f64 row-major,
// k columns allotted) orthonormal to columns [0, col).
void fill_orthonormal_column(std::vector<double>& m, std::size_t n, std::size_t k,
                             std::size_t col) {
    for (std::size_t candidate = 0; candidate < n; ++candidate) {
        std::vector<double> v(n, 0.0);
        v[candidate] = 1.0;
        for (std::size_t j = 0; j < col; ++j) {
            double proj = 0.0;
            for (std::size_t i = 0; i < n; ++i) proj += v[i] * m[i * k + j];
            for (std::size_t i = 0; i < n; ++i) v[i] -= proj * m[i * k + j];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 1e-6) {
            for (std::size_t i = 0; i < n; ++i) m[i * k + col] = v[i] / norm;
            return;
        }
    }
    // n columns already span the space; cannot happen for col < n.
    throw NumericError("svd: failed to complete orthonormal basis");
}

} // namespace

Matrix SvdResult::reconstruct() const {
    Matrix us = u;
    for (std::size_t i = 0; i < us.rows; ++i)
        for (std::size_t j = 0; j < us.cols; ++j)
            us.at(i, j) = static_cast<float>(static_cast<double>(us.at(i, j)) * s[j]);
    return matmul(us, transpose(v));
}

SvdResult svd(const Matrix& m) {
    if (m.empty()) throw ShapeError("svd: empty matrix");
    require_finite(m, "svd input");

    const std::size_t rows = m.rows, cols = m.cols;
    const bool gram_on_cols = cols <= rows; // eigendecompose the smaller Gram matrix
    const std::size_t n = gram_on_cols ? cols : rows;
    const std::size_t k = n;

    // Gram matrix in f64.
    std::vector<double> md(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) md[i] = m.data[i];
    std::vector<double> gram(n * n, 0.0);
    if (gram_on_cols) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t r = 0; r < rows; ++r) acc += md[r * cols + i] * md[r * cols + j];
                gram[i * n + j] = gram[j * n + i] = acc;
            }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t c = 0; c < cols; ++c) acc += md[i * cols + c] * md[j * cols + c];
                gram[i * n + j] = gram[j * n + i] = acc;
            }
    }

    std::vector<double> vecs;
    jacobi_eigen(gram, vecs, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return gram[a * n + a] > gram[b * n + b];
    });

    std::vector<double> sing(n);
    std::vector<double> small(n * k);  // eigenvector side (the smaller dimension)
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = order[j];
        sing[j] = std::sqrt(std::max(gram[src * n + src], 0.0));
        for (std::size_t i = 0; i < n; ++i) small[i * k + j] = vecs[i * n + src];
    }

    // Recover the large side: large_j = M * small_j / s_j (or M^T for the
    // row-Gram case). Gram squaring loses singular values near f32 noise;
    // those directions are treated as exact zeros and completed orthonormally.
    // Recovered columns are re-orthogonalized against earlier ones so the
    // factor stays orthonormal even for clustered spectra.
    const std::size_t big = gram_on_cols ? rows : cols;
    std::vector<double> large(big * k, 0.0);
    const double degenerate_tol = sing.empty() ? 0.0 : sing[0] * 1e-7;
    for (std::size_t j = 0; j < k; ++j) {
        bool filled = false;
        if (sing[j] > degenerate_tol && sing[j] > 0.0) {
            for (std::size_t i = 0; i < big; ++i) {
                double acc = 0.0;
                for (std::size_t t = 0; t < n; ++t) {
                    const double mv = gram_on_cols ? md[i * cols + t] : md[t * cols + i];
                    acc += mv * small[t * k + j];
                }
                large[i * k + j] = acc / sing[j];
            }
            for (std::size_t prev = 0; prev < j; ++prev) {
                double proj = 0.0;
                for (std::size_t i = 0; i < big; ++i)
                    proj += large[i * k + j] * large[i * k + prev];
                for (std::size_t i = 0; i < big; ++i)
                    large[i * k + j] -= proj * large[i * k + prev];
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < big; ++i) norm += large[i * k + j] * large[i * k + j];
            norm = std::sqrt(norm);
            if (norm > 0.5) {
                for (std::size_t i = 0; i < big; ++i) large[i * k + j] /= norm;
                filled = true;
            }
        }
        if (!filled) {
            sing[j] = 0.0;
            for (std::size_t i = 0; i < big; ++i) large[i * k + j] = 0.0;
            fill_orthonormal_column(large, big, k, j);
        }
    }

    // Sign convention: largest-magnitude entry of each u-column positive.
    std::vector<double>& ucols = gram_on_cols ? large : small;
    std::vector<double>& vcols = gram_on_cols ? small : large;
    const std::size_t urows = gram_on_cols ? big : n;
    const std::size_t vrows = gram_on_cols ? n : big;
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < urows; ++i) {
            const double mag = std::abs(ucols[i * k + j]);
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (ucols[arg * k + j] < 0.0) {
            for (std::size_t i = 0; i < urows; ++i) ucols[i * k + j] = -ucols[i * k + j];
            for (std::size_t i = 0; i < vrows; ++i) vcols[i * k + j] = -vcols[i * k + j];
        }
    }

    SvdResult out;
    out.u = Matrix(urows, k);
    out.v = Matrix(vrows, k);
    out.s.resize(k);
    for (std::size_t i = 0; i < urows * k; ++i) out.u.data[i] = static_cast<float>(ucols[i]);
    for (std::size_t i = 0; i < vrows * k; ++i) out.v.data[i] = static_cast<float>(vcols[i]);
    for (std::size_t j = 0; j < k; ++j) out.s[j] = static_cast<float>(sing[j]);
    return out;
}

Matrix pseudo_inverse(const Matrix& m, float rcond) {
    if (m.empty()) throw ShapeError("pseudo_inverse: empty matrix");
    const SvdResult f = svd(m);
    const double s_max = f.s.empty() ? 0.0 : static_cast<double>(f.s[0]);
    const double cutoff = static_cast<double>(rcond) * s_max;
    // pinv = V * diag(1/s) * U^T
    Matrix vs = f.v;
    for (std::size_t j = 0; j < vs.cols; ++j) {
        const double sj = f.s[j];
        const double inv = (sj > cutoff && sj > 0.0) ? 1.0 / sj : 0.0;
        for (std::size_t i = 0; i < vs.rows; ++i)
            vs.at(i, j) = static_cast<float>(static_cast<double>(vs.at(i, j)) * inv);
    }
    return matmul(vs, transpose(f.u));
}

} // namespace crisp
