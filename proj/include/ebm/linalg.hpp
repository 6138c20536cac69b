#pragma once

#include <cstddef>
#include <vector>

#include "ebm/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ebm::linalg {

// Dense row-major matrix. All kernels below use a fixed summation order, so
// results are bitwise identical across runs and across thread counts: parallel
// loops always run over output rows, never over a reduction axis.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double* row(std::size_t i) { return a.data() + i * cols; }
    const double* row(std::size_t i) const { return a.data() + i * cols; }
    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    std::size_t size() const { return a.size(); }
};

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Dot product with four independent accumulator chains combined in a fixed
// tree. The order never depends on thread count or alignment.
inline double dot(const double* __restrict x, const double* __restrict y, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        a0 += x[j] * y[j];
        a1 += x[j + 1] * y[j + 1];
        a2 += x[j + 2] * y[j + 2];
        a3 += x[j + 3] * y[j + 3];
    }
    for (; j < n; ++j) a0 += x[j] * y[j];
    return (a0 + a1) + (a2 + a3);
}

inline void axpy(double alpha, const double* __restrict x, double* __restrict y, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) y[j] += alpha * x[j];
}

// y = M x
inline void gemv(const Matrix& m, const double* x, double* y) {
    const std::size_t rows = m.rows, cols = m.cols;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows); ++i)
        y[i] = dot(m.row(static_cast<std::size_t>(i)), x, cols);
}

// y += M x
inline void gemv_add(const Matrix& m, const double* x, double* y) {
    const std::size_t rows = m.rows, cols = m.cols;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows); ++i)
        y[i] += dot(m.row(static_cast<std::size_t>(i)), x, cols);
}

// y += M^T x, accumulated row by row in ascending order (single-threaded: the
// per-output sums would otherwise interleave).
inline void gemtv_add(const Matrix& m, const double* x, double* y) {
    for (std::size_t i = 0; i < m.rows; ++i) axpy(x[i], m.row(i), y, m.cols);
}

// Lane width for batched kernels. Batches are processed in chunks of kLanes
// vectors; the final chunk is zero-padded.
inline constexpr std::size_t kLanes = 16;

// Packs chunk vectors x_s (each of length n) into lane layout L[j*kLanes + s].
// Unused lanes must be pre-zeroed by the caller via the fill argument.
inline std::vector<double> pack_lanes(const std::vector<const double*>& xs, std::size_t n) {
    require_data(xs.size() <= kLanes, "pack_lanes: too many lanes");
    std::vector<double> lanes(n * kLanes, 0.0);
    for (std::size_t s = 0; s < xs.size(); ++s) {
        const double* x = xs[s];
        for (std::size_t j = 0; j < n; ++j) lanes[j * kLanes + s] = x[j];
    }
    return lanes;
}

// out[i*kLanes + s] += sum_j M[i][j] * X[j*kLanes + s] for all kLanes lanes at
// once. Four j-unrolled accumulator banks per lane keep the FMA chains short;
// the combine order is fixed.
inline void gemv_lanes_add(const Matrix& m, const double* __restrict xlanes, double* __restrict outlanes) {
    const std::size_t rows = m.rows, cols = m.cols;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(rows); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* __restrict row = m.row(i);
        double a0[kLanes] = {0}, a1[kLanes] = {0}, a2[kLanes] = {0}, a3[kLanes] = {0};
        std::size_t j = 0;
        for (; j + 4 <= cols; j += 4) {
            const double r0 = row[j], r1 = row[j + 1], r2 = row[j + 2], r3 = row[j + 3];
            const double* __restrict v = xlanes + j * kLanes;
            for (std::size_t s = 0; s < kLanes; ++s) {
                a0[s] += r0 * v[s];
                a1[s] += r1 * v[kLanes + s];
                a2[s] += r2 * v[2 * kLanes + s];
                a3[s] += r3 * v[3 * kLanes + s];
            }
        }
        for (; j < cols; ++j) {
            const double r = row[j];
            const double* __restrict v = xlanes + j * kLanes;
            for (std::size_t s = 0; s < kLanes; ++s) a0[s] += r * v[s];
        }
        double* __restrict out = outlanes + i * kLanes;
        for (std::size_t s = 0; s < kLanes; ++s) out[s] += (a0[s] + a1[s]) + (a2[s] + a3[s]);
    }
}

// M[i][j] += scale * sum_s C[i*stride + s] * x_s[j] over the given vectors, in
// ascending s order per row. Row-parallel, deterministic.
inline void rank_update(Matrix& m, const double* coef, std::size_t stride,
                        const std::vector<const double*>& xs, double scale) {
    const std::size_t rows = m.rows, cols = m.cols;
    const std::size_t count = xs.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(rows); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* row = m.row(i);
        for (std::size_t s = 0; s < count; ++s) axpy(scale * coef[i * stride + s], xs[s], row, cols);
    }
}

} // namespace ebm::linalg
