#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace mhdlab {

using cplx = std::complex<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Equispaced periodic grid y_j = 2πj/n on [0, 2π); n is a power of two.
class PeriodicGrid {
public:
    static constexpr std::size_t min_points = 64;

    explicit PeriodicGrid(std::size_t n);
    static bool valid_size(std::size_t n) noexcept { return n >= min_points && (n & (n - 1)) == 0; }

    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return two_pi / static_cast<double>(n_); }
    double node(std::size_t j) const noexcept { return spacing() * static_cast<double>(j); }
    std::vector<double> nodes() const;

    /// Integer Fourier index of storage slot j in FFT order; slot n/2 holds k = -n/2.
    long wavenumber(std::size_t j) const noexcept
    {
        const long jj = static_cast<long>(j), nn = static_cast<long>(n_);
        return jj < nn / 2 ? jj : jj - nn;
    }
    bool is_nyquist(std::size_t j) const noexcept { return j == n_ / 2; }

    friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

private:
    std::size_t n_;
};

/// Complex samples on a PeriodicGrid. Construction rejects NaN/Inf.
class ComplexField {
public:
    explicit ComplexField(PeriodicGrid grid);  // zeros
    ComplexField(PeriodicGrid grid, std::vector<cplx> values);

    static ComplexField sample(PeriodicGrid grid, const std::function<cplx(double)>& f);

    const PeriodicGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const cplx> values() const noexcept { return values_; }
    std::span<cplx> values() noexcept { return values_; }
    cplx operator[](std::size_t j) const noexcept { return values_[j]; }
    cplx& operator[](std::size_t j) noexcept { return values_[j]; }

    /// Re-validates finiteness after in-place edits.
    void check_finite() const;

    ComplexField& operator+=(const ComplexField& o);
    ComplexField& operator-=(const ComplexField& o);
    ComplexField& operator*=(cplx s);
    ComplexField& operator*=(std::span<const double> w);  // pointwise
    ComplexField& operator*=(const ComplexField& o);      // pointwise

    friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
    friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
    friend ComplexField operator*(ComplexField a, cplx s) { return a *= s; }
    friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }
    friend ComplexField operator*(ComplexField a, const ComplexField& b) { return a *= b; }
    friend ComplexField operator*(ComplexField a, std::span<const double> w) { return a *= w; }

    ComplexField conj() const;

private:
    PeriodicGrid grid_;
    std::vector<cplx> values_;
};

void require_same_grid(const ComplexField& a, const ComplexField& b);

/// Fourier coefficients c_k = (1/n) Σ_j f_j e^{-ik y_j}, FFT order. Thread-safe.
std::vector<cplx> fourier_coefficients(std::span<const cplx> values);
/// Inverse of fourier_coefficients.
std::vector<cplx> from_fourier(std::span<const cplx> coeffs);

ComplexField derivative(const ComplexField& f, int order);
ComplexField laplacian_alpha(const ComplexField& f, int alpha);
ComplexField invert_laplacian_alpha(const ComplexField& f, int alpha);

/// Multiplies each Fourier coefficient by m(k), k the signed wavenumber (Nyquist k = -n/2).
ComplexField apply_multiplier(const ComplexField& f, const std::function<cplx(long)>& m);

/// ∫_0^{2π} |f|² dy by the periodic trapezoid rule (spectrally exact).
double l2_norm(const ComplexField& f);
double l2_norm(std::span<const double> f);
double lp_norm(const ComplexField& f, double p);
double linf_norm(const ComplexField& f);
/// Same quantity as l2_norm but computed from Fourier coefficients.
double fourier_l2_norm(const ComplexField& f);
/// ‖(1 − ∂²)^{s/2} f‖_{L²}.
double sobolev_norm(const ComplexField& f, double s);
/// ‖f‖_{L²} + ‖∂f‖_{L²}.
double h1_norm(const ComplexField& f);

/// Trigonometric interpolant at an arbitrary y; the Nyquist mode enters as a cosine.
cplx interpolate(const ComplexField& f, double y);
/// Same, reusing precomputed coefficients for many evaluation points.
cplx interpolate_coefficients(std::span<const cplx> coeffs, double y);

}  // namespace mhdlab
