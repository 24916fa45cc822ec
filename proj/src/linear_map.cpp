#include "sacq/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sacq/kernels.hpp"

namespace sacq {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("linear map: dimensions must be positive");
    if (rows > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()) ||
        cols > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
        throw InvalidArgument("linear map: dimension exceeds 32-bit index range");
}

}  // namespace

LinearMap LinearMap::dense(std::size_t rows, std::size_t cols, Vector row_major) {
    check_shape(rows, cols);
    require_same_size(row_major.size(), rows * cols, "dense matrix storage");
    require_finite(row_major, "dense matrix");
    LinearMap m(rows, cols);
    m.dense_ = std::move(row_major);
    return m;
}

LinearMap LinearMap::from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) throw InvalidArgument("linear map: no rows");
    const std::size_t n = rows.front().size();
    Vector data;
    data.reserve(rows.size() * n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require_same_size(rows[i].size(), n, ("matrix row " + std::to_string(i)).c_str());
        data.insert(data.end(), rows[i].begin(), rows[i].end());
    }
    return dense(rows.size(), n, std::move(data));
}

LinearMap LinearMap::sparse(std::size_t rows, std::size_t cols, std::span<const Triplet> entries) {
    check_shape(rows, cols);
    std::vector<Triplet> sorted(entries.begin(), entries.end());
    for (const auto& t : sorted) {
        if (t.row >= rows || t.col >= cols)
            throw DimensionError("sparse entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                 ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
        if (!std::isfinite(t.value)) throw InvalidArgument("sparse entry has a non-finite value");
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    // Sum duplicates, drop zeros.
    std::vector<Triplet> merged;
    for (const auto& t : sorted) {
        if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
            merged.back().value += t.value;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });

    LinearMap m(rows, cols);
    m.sparse_ = true;
    m.csr_ptr_.assign(rows + 1, 0);
    m.csr_col_.reserve(merged.size());
    m.csr_val_.reserve(merged.size());
    for (const auto& t : merged) {
        ++m.csr_ptr_[t.row + 1];
        m.csr_col_.push_back(static_cast<std::int32_t>(t.col));
        m.csr_val_.push_back(t.value);
    }
    for (std::size_t i = 0; i < rows; ++i) m.csr_ptr_[i + 1] += m.csr_ptr_[i];

    m.csc_ptr_.assign(cols + 1, 0);
    for (const auto& t : merged) ++m.csc_ptr_[t.col + 1];
    for (std::size_t j = 0; j < cols; ++j) m.csc_ptr_[j + 1] += m.csc_ptr_[j];
    m.csc_row_.resize(merged.size());
    m.csc_val_.resize(merged.size());
    std::vector<std::int32_t> fill(m.csc_ptr_.begin(), m.csc_ptr_.end() - 1);
    for (const auto& t : merged) {
        const auto pos = static_cast<std::size_t>(fill[t.col]++);
        m.csc_row_[pos] = static_cast<std::int32_t>(t.row);
        m.csc_val_[pos] = t.value;
    }
    return m;
}

std::size_t LinearMap::nonzeros() const {
    if (sparse_) return csr_val_.size();
    return static_cast<std::size_t>(std::count_if(dense_.begin(), dense_.end(), [](double v) { return v != 0.0; }));
}

void LinearMap::apply(std::span<const double> x, std::span<double> y) const {
    require_same_size(x.size(), cols_, "linear map input");
    require_same_size(y.size(), rows_, "linear map output");
    const auto& k = kernels::active();
    if (sparse_) {
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto b = static_cast<std::size_t>(csr_ptr_[i]);
            const auto e = static_cast<std::size_t>(csr_ptr_[i + 1]);
            y[i] = k.gather_dot(csr_val_.data() + b, csr_col_.data() + b, x.data(), e - b);
        }
    } else {
        for (std::size_t i = 0; i < rows_; ++i) y[i] = k.dot(dense_.data() + i * cols_, x.data(), cols_);
    }
}

Vector LinearMap::apply(std::span<const double> x) const {
    Vector y(rows_);
    apply(x, y);
    return y;
}

void LinearMap::apply_transpose(std::span<const double> y, std::span<double> x) const {
    require_same_size(y.size(), rows_, "transpose input");
    require_same_size(x.size(), cols_, "transpose output");
    const auto& k = kernels::active();
    if (sparse_) {
        for (std::size_t j = 0; j < cols_; ++j) {
            const auto b = static_cast<std::size_t>(csc_ptr_[j]);
            const auto e = static_cast<std::size_t>(csc_ptr_[j + 1]);
            x[j] = k.gather_dot(csc_val_.data() + b, csc_row_.data() + b, y.data(), e - b);
        }
    } else {
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (y[i] != 0.0) k.axpy(y[i], dense_.data() + i * cols_, x.data(), cols_);
    }
}

Vector LinearMap::apply_transpose(std::span<const double> y) const {
    Vector x(cols_);
    apply_transpose(y, x);
    return x;
}

Vector LinearMap::row(std::size_t i) const {
    if (i >= rows_) throw DimensionError("row index " + std::to_string(i) + " out of range");
    if (!sparse_) return Vector(dense_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                dense_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    Vector r(cols_, 0.0);
    for (auto k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k) r[static_cast<std::size_t>(csr_col_[k])] = csr_val_[k];
    return r;
}

std::vector<Triplet> LinearMap::triplets() const {
    std::vector<Triplet> out;
    if (sparse_) {
        out.reserve(csr_val_.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (auto k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k)
                out.push_back({i, static_cast<std::size_t>(csr_col_[k]), csr_val_[k]});
    } else {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (dense_[i * cols_ + j] != 0.0) out.push_back({i, j, dense_[i * cols_ + j]});
    }
    return out;
}

bool LinearMap::operator==(const LinearMap& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && sparse_ == o.sparse_ && dense_ == o.dense_ &&
           csr_ptr_ == o.csr_ptr_ && csr_col_ == o.csr_col_ && csr_val_ == o.csr_val_;
}

}  // namespace sacq
