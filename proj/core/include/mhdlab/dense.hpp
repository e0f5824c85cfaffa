#pragma once

#include <span>
#include <vector>

#include "mhdlab/grid.hpp"

namespace mhdlab {

/// Column-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    cplx operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }
    cplx* data() noexcept { return data_.data(); }
    const cplx* data() const noexcept { return data_.data(); }

    std::vector<cplx> apply(std::span<const cplx> x) const;
    double norm1() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

/// Pivoted LU (LAPACK zgetrf) of a square matrix, with a 1-norm condition estimate.
class LUFactor {
public:
    explicit LUFactor(ComplexMatrix a);

    std::size_t size() const noexcept { return lu_.rows(); }
    /// Estimated κ₁ = ‖A‖₁‖A⁻¹‖₁; +inf for an exactly singular factor.
    double condition() const noexcept { return condition_; }
    bool singular() const noexcept { return singular_; }
    cplx determinant() const;

    /// Solves A x = b in place.
    void solve(std::span<cplx> b) const;
    /// Solves conj(A) x = b in place (same factorization).
    void solve_conjugate(std::span<cplx> b) const;

private:
    ComplexMatrix lu_;
    std::vector<int> pivots_;
    double condition_ = 0.0;
    bool singular_ = false;
};

}  // namespace mhdlab
