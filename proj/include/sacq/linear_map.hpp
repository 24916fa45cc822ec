#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sacq/core.hpp"

namespace sacq {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// m x n real matrix, either dense row-major or sparse. Sparse maps keep a
/// CSR copy for A x and a CSC copy for A^T y, both assembled at construction.
class LinearMap {
public:
    static LinearMap dense(std::size_t rows, std::size_t cols, Vector row_major);
    /// Duplicate (row, col) entries are summed; explicit zeros are dropped.
    static LinearMap sparse(std::size_t rows, std::size_t cols, std::span<const Triplet> entries);
    static LinearMap from_rows(const std::vector<Vector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_sparse() const { return sparse_; }
    std::size_t nonzeros() const;

    void apply(std::span<const double> x, std::span<double> y) const;
    Vector apply(std::span<const double> x) const;
    void apply_transpose(std::span<const double> y, std::span<double> x) const;
    Vector apply_transpose(std::span<const double> y) const;

    Vector row(std::size_t i) const;
    /// Nonzero entries in row-major order.
    std::vector<Triplet> triplets() const;

    bool operator==(const LinearMap& other) const;

private:
    LinearMap(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    std::size_t rows_;
    std::size_t cols_;
    bool sparse_ = false;
    Vector dense_;  // row-major
    std::vector<std::int32_t> csr_ptr_, csr_col_;
    Vector csr_val_;
    std::vector<std::int32_t> csc_ptr_, csc_row_;
    Vector csc_val_;
};

}  // namespace sacq
