#include "kernels_impl.hpp"

namespace sacq::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void blend(double lambda, const double* x, const double* y, double* out, std::size_t n) {
    const double keep = 1.0 - lambda;
    for (std::size_t i = 0; i < n; ++i) out[i] = keep * x[i] + lambda * y[i];
}

void clamp_nonneg(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sq_neg_part(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] < 0.0) s += x[i] * x[i];
    return s;
}

double gather_dot(const double* val, const std::int32_t* idx, const double* x, std::size_t nnz) {
    double s = 0.0;
    for (std::size_t k = 0; k < nnz; ++k) s += val[k] * x[idx[k]];
    return s;
}

const Table& table() {
    static const Table t{Backend::Scalar, dot, axpy, blend, clamp_nonneg, sq_dist, sq_neg_part, gather_dot};
    return t;
}

}  // namespace sacq::kernels::scalar
