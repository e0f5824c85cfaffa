#include "mhdlab/dense.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>

#include "mhdlab/errors.hpp"

namespace mhdlab {

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> x) const
{
    require(x.size() == cols_, ErrorKind::invalid_argument, "matrix-vector size mismatch");
    std::vector<cplx> y(rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
        const cplx xj = x[j];
        const cplx* col = data_.data() + j * rows_;
        for (std::size_t i = 0; i < rows_; ++i) y[i] += col[i] * xj;
    }
    return y;
}

double ComplexMatrix::norm1() const
{
    double m = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) s += std::abs(data_[j * rows_ + i]);
        m = std::max(m, s);
    }
    return m;
}

LUFactor::LUFactor(ComplexMatrix a) : lu_(std::move(a))
{
    require(lu_.rows() == lu_.cols() && lu_.rows() > 0, ErrorKind::invalid_argument, "LU needs a square matrix");
    const auto n = static_cast<lapack_int>(lu_.rows());
    const double anorm = lu_.norm1();
    pivots_.resize(lu_.rows());
    auto* a_ptr = reinterpret_cast<lapack_complex_double*>(lu_.data());
    const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a_ptr, n, pivots_.data());
    require(info >= 0, ErrorKind::invalid_argument, "zgetrf: illegal argument");
    if (info > 0) {
        singular_ = true;
        condition_ = std::numeric_limits<double>::infinity();
        return;
    }
    double rcond = 0.0;
    const lapack_int cinfo = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, a_ptr, n, anorm, &rcond);
    require(cinfo == 0, ErrorKind::invalid_argument, "zgecon failed");
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

cplx LUFactor::determinant() const
{
    cplx d = 1.0;
    for (std::size_t i = 0; i < lu_.rows(); ++i) {
        d *= lu_(i, i);
        if (pivots_[i] != static_cast<int>(i) + 1) d = -d;
    }
    return d;
}

void LUFactor::solve(std::span<cplx> b) const
{
    require(b.size() == lu_.rows(), ErrorKind::invalid_argument, "rhs size mismatch");
    require(!singular_, ErrorKind::near_singular, "matrix is exactly singular");
    const auto n = static_cast<lapack_int>(lu_.rows());
    const lapack_int info =
        LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, reinterpret_cast<const lapack_complex_double*>(lu_.data()), n,
                       pivots_.data(), reinterpret_cast<lapack_complex_double*>(b.data()), n);
    require(info == 0, ErrorKind::invalid_argument, "zgetrs failed");
}

void LUFactor::solve_conjugate(std::span<cplx> b) const
{
    // conj(A) x = b  ⇔  A conj(x) = conj(b).
    for (cplx& z : b) z = std::conj(z);
    solve(b);
    for (cplx& z : b) z = std::conj(z);
}

}  // namespace mhdlab
