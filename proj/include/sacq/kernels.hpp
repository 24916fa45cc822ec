#pragma once
// Dense and sparse arithmetic kernels used by every operator in the library.
//
// Each kernel has a scalar reference implementation and, where the build
// target allows it, an AVX2/FMA (x86-64) or NEON (aarch64) variant. The
// variant is picked once at first use from the CPU feature set; the
// SACQ_KERNELS environment variable ("scalar", "avx2", "neon") overrides
// the choice, and tests may switch backends explicitly.
//
// Reductions in the vector variants accumulate in lanes, so results differ
// from the scalar reference in the last few ulps. Within one backend every
// kernel is deterministic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sacq::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

struct Table {
    Backend backend;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out = (1 - lambda) * x + lambda * y
    void (*blend)(double lambda, const double* x, const double* y, double* out, std::size_t n);
    // out = max(0, x), with -0.0 mapped to +0.0
    void (*clamp_nonneg)(const double* x, double* out, std::size_t n);
    // sum_i (a_i - b_i)^2
    double (*sq_dist)(const double* a, const double* b, std::size_t n);
    // sum_i min(0, x_i)^2
    double (*sq_neg_part)(const double* x, std::size_t n);
    // sum_k val[k] * x[idx[k]]
    double (*gather_dot)(const double* val, const std::int32_t* idx, const double* x, std::size_t nnz);
};

/// Backend in effect for this process.
const Table& active();

/// Reference implementations, always available.
const Table& scalar_table();

/// True when `b` was compiled in and the running CPU supports it.
bool available(Backend b);

/// Switches the process-wide backend. Throws std::invalid_argument when the
/// backend is unavailable. Not thread-safe with respect to running kernels.
void set_backend(Backend b);

const Table* table_for(Backend b);

// Convenience wrappers over the active table.

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void blend(double lambda, std::span<const double> x, std::span<const double> y,
                  std::span<double> out) {
    active().blend(lambda, x.data(), y.data(), out.data(), x.size());
}

inline void clamp_nonneg(std::span<const double> x, std::span<double> out) {
    active().clamp_nonneg(x.data(), out.data(), x.size());
}

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    return active().sq_dist(a.data(), b.data(), a.size());
}

inline double sq_neg_part(std::span<const double> x) {
    return active().sq_neg_part(x.data(), x.size());
}

inline double gather_dot(std::span<const double> val, std::span<const std::int32_t> idx,
                         std::span<const double> x) {
    return active().gather_dot(val.data(), idx.data(), x.data(), val.size());
}

}  // namespace sacq::kernels
