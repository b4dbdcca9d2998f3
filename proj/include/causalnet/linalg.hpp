#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "causalnet/errors.hpp"

namespace causalnet {

struct dense_matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    dense_matrix() = default;
    dense_matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static dense_matrix identity(std::size_t n) {
        dense_matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }
};

// Solves A x = b for symmetric positive definite A, in place Cholesky.
inline std::vector<double> cholesky_solve(dense_matrix A, std::vector<double> b) {
    const std::size_t n = A.rows;
    if (A.cols != n || b.size() != n)
        throw std::invalid_argument("cholesky_solve: dimension mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k)
            d -= A(j, k) * A(j, k);
        if (d <= 0.0)
            throw convergence_error("cholesky_solve: matrix not positive definite");
        const double l = std::sqrt(d);
        A(j, j) = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= A(i, k) * A(j, k);
            A(i, j) = s / l;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {  // L y = b
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k)
            s -= A(i, k) * b[k];
        b[i] = s / A(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {  // L^T x = y
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= A(k, i) * b[k];
        b[i] = s / A(i, i);
    }
    return b;
}

// Inverse of a symmetric positive definite matrix via Cholesky.
inline dense_matrix spd_inverse(const dense_matrix& A) {
    const std::size_t n = A.rows;
    dense_matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const auto col = cholesky_solve(A, std::move(e));
        for (std::size_t i = 0; i < n; ++i)
            inv(i, j) = col[i];
    }
    return inv;
}

struct eigen_result {
    std::vector<double> values;  // descending
    dense_matrix vectors;        // column k pairs with values[k]
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Input must be symmetric within 1e-10. Sweeps run until every
// off-diagonal magnitude drops below 1e-12 (relative to the largest entry
// when that entry exceeds 1, so the threshold is meaningful at any scale).
// Eigenvalues are returned descending; each eigenvector is flipped so its
// largest-magnitude entry is positive.
inline eigen_result jacobi_eigen_sym(dense_matrix A) {
    const std::size_t n = A.rows;
    if (A.cols != n)
        throw std::invalid_argument("jacobi_eigen_sym: matrix must be square");
    double maxabs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::fabs(A(i, j) - A(j, i)) > 1e-10)
                throw std::invalid_argument("jacobi_eigen_sym: input not symmetric");
            maxabs = std::max(maxabs, std::fabs(A(i, j)));
        }
    for (std::size_t i = 0; i < n; ++i)
        maxabs = std::max(maxabs, std::fabs(A(i, i)));
    const double tol = 1e-12 * std::max(1.0, maxabs);

    dense_matrix V = dense_matrix::identity(n);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off = std::max(off, std::fabs(A(p, q)));
        if (off < tol)
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::fabs(apq) < tol)
                    continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return A(i, i) > A(j, j); });

    eigen_result out;
    out.values.resize(n);
    out.vectors = dense_matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.values[k] = A(src, src);
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(V(i, src)) > std::fabs(V(imax, src)))
                imax = i;
        const double flip = V(imax, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            out.vectors(i, k) = flip * V(i, src);
    }
    return out;
}

}  // namespace causalnet
