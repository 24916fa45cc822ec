// NEON variants for aarch64, where Advanced SIMD is part of the base ISA.

#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace sacq::kernels::neon {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void blend(double lambda, const double* x, const double* y, double* out, std::size_t n) {
    const double keep = 1.0 - lambda;
    const float64x2_t vk = vdupq_n_f64(keep);
    const float64x2_t vl = vdupq_n_f64(lambda);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vfmaq_f64(vmulq_f64(vk, vld1q_f64(x + i)), vl, vld1q_f64(y + i)));
    for (; i < n; ++i) out[i] = keep * x[i] + lambda * y[i];
}

void clamp_nonneg(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(x + i);
        // Select on a strict compare so -0.0 maps to +0.0.
        const uint64x2_t pos = vcgtq_f64(v, vdupq_n_f64(0.0));
        vst1q_f64(out + i, vbslq_f64(pos, v, vdupq_n_f64(0.0)));
    }
    for (; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sq_neg_part(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t m = vminq_f64(vld1q_f64(x + i), vdupq_n_f64(0.0));
        acc = vfmaq_f64(acc, m, m);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i)
        if (x[i] < 0.0) s += x[i] * x[i];
    return s;
}

double gather_dot(const double* val, const std::int32_t* idx, const double* x, std::size_t nnz) {
    // No gather instruction; pair up loads to keep two accumulators busy.
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= nnz; k += 2) {
        const double pair[2] = {x[idx[k]], x[idx[k + 1]]};
        acc = vfmaq_f64(acc, vld1q_f64(val + k), vld1q_f64(pair));
    }
    double s = vaddvq_f64(acc);
    for (; k < nnz; ++k) s += val[k] * x[idx[k]];
    return s;
}

}  // namespace

const Table& table() {
    static const Table t{Backend::Neon, dot, axpy, blend, clamp_nonneg, sq_dist, sq_neg_part, gather_dot};
    return t;
}

}  // namespace sacq::kernels::neon
