#include "mhdlab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "mhdlab/errors.hpp"

namespace mhdlab {

namespace {

// The FFTW planner is not thread-safe; execution of an existing plan is.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<cplx> a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

void execute(std::span<const cplx> in, std::span<cplx> out, int sign)
{
    fftw_plan p = plan_cache().get(in.size(), sign);
    // Out-of-place complex transforms leave the input untouched.
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n)
{
    require(is_power_of_two(n) && n >= min_points, ErrorKind::invalid_argument,
            "grid size must be a power of two >= 64, got " + std::to_string(n));
}

std::vector<double> PeriodicGrid::nodes() const
{
    std::vector<double> y(n_);
    for (std::size_t j = 0; j < n_; ++j) y[j] = node(j);
    return y;
}

ComplexField::ComplexField(PeriodicGrid grid) : grid_(grid), values_(grid.size(), cplx{}) {}

ComplexField::ComplexField(PeriodicGrid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values))
{
    require(values_.size() == grid_.size(), ErrorKind::grid_mismatch, "field length does not match grid");
    check_finite();
}

ComplexField ComplexField::sample(PeriodicGrid grid, const std::function<cplx(double)>& f)
{
    std::vector<cplx> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return ComplexField(grid, std::move(v));
}

void ComplexField::check_finite() const
{
    for (const cplx& z : values_)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::non_finite_field,
                "field contains NaN or Inf");
}

ComplexField& ComplexField::operator+=(const ComplexField& o)
{
    require_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o)
{
    require_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
}

ComplexField& ComplexField::operator*=(cplx s)
{
    for (cplx& z : values_) z *= s;
    return *this;
}

ComplexField& ComplexField::operator*=(std::span<const double> w)
{
    require(w.size() == values_.size(), ErrorKind::grid_mismatch, "weight length does not match grid");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= w[j];
    return *this;
}

ComplexField& ComplexField::operator*=(const ComplexField& o)
{
    require_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= o.values_[j];
    return *this;
}

ComplexField ComplexField::conj() const
{
    ComplexField r = *this;
    for (cplx& z : r.values_) z = std::conj(z);
    return r;
}

void require_same_grid(const ComplexField& a, const ComplexField& b)
{
    require(a.grid() == b.grid(), ErrorKind::grid_mismatch,
            "fields live on different grids (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

std::vector<cplx> fourier_coefficients(std::span<const cplx> values)
{
    std::vector<cplx> out(values.size());
    execute(values, out, FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(values.size());
    for (cplx& z : out) z *= inv;
    return out;
}

std::vector<cplx> from_fourier(std::span<const cplx> coeffs)
{
    std::vector<cplx> out(coeffs.size());
    execute(coeffs, out, FFTW_BACKWARD);
    return out;
}

ComplexField apply_multiplier(const ComplexField& f, const std::function<cplx(long)>& m)
{
    const PeriodicGrid& g = f.grid();
    std::vector<cplx> c = fourier_coefficients(f.values());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= m(g.wavenumber(j));
    return ComplexField(g, from_fourier(c));
}

ComplexField derivative(const ComplexField& f, int order)
{
    require(order == 1 || order == 2, ErrorKind::invalid_argument, "derivative order must be 1 or 2");
    const long nyq = -static_cast<long>(f.size() / 2);
    if (order == 1)
        return apply_multiplier(f, [nyq](long k) { return k == nyq ? cplx{} : cplx(0.0, double(k)); });
    return apply_multiplier(f, [](long k) { return cplx(-double(k) * double(k), 0.0); });
}

ComplexField laplacian_alpha(const ComplexField& f, int alpha)
{
    require(alpha != 0, ErrorKind::zero_wavenumber, "alpha must be nonzero");
    const double a2 = double(alpha) * double(alpha);
    return apply_multiplier(f, [a2](long k) { return cplx(-(double(k) * double(k) + a2), 0.0); });
}

ComplexField invert_laplacian_alpha(const ComplexField& f, int alpha)
{
    require(alpha != 0, ErrorKind::zero_wavenumber, "alpha must be nonzero");
    const double a2 = double(alpha) * double(alpha);
    return apply_multiplier(f, [a2](long k) { return cplx(-1.0 / (double(k) * double(k) + a2), 0.0); });
}

double l2_norm(const ComplexField& f)
{
    double s = 0.0;
    for (const cplx& z : f.values()) s += std::norm(z);
    return std::sqrt(s * f.grid().spacing());
}

double l2_norm(std::span<const double> f)
{
    double s = 0.0;
    for (double x : f) s += x * x;
    return std::sqrt(s * two_pi / static_cast<double>(f.size()));
}

double lp_norm(const ComplexField& f, double p)
{
    double s = 0.0;
    for (const cplx& z : f.values()) s += std::pow(std::abs(z), p);
    return std::pow(s * f.grid().spacing(), 1.0 / p);
}

double linf_norm(const ComplexField& f)
{
    double m = 0.0;
    for (const cplx& z : f.values()) m = std::max(m, std::abs(z));
    return m;
}

double fourier_l2_norm(const ComplexField& f)
{
    double s = 0.0;
    for (const cplx& c : fourier_coefficients(f.values())) s += std::norm(c);
    return std::sqrt(two_pi * s);
}

double sobolev_norm(const ComplexField& f, double s)
{
    double acc = 0.0;
    const PeriodicGrid& g = f.grid();
    const std::vector<cplx> c = fourier_coefficients(f.values());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double k = double(g.wavenumber(j));
        acc += std::pow(1.0 + k * k, s) * std::norm(c[j]);
    }
    return std::sqrt(two_pi * acc);
}

double h1_norm(const ComplexField& f) { return l2_norm(f) + l2_norm(derivative(f, 1)); }

cplx interpolate_coefficients(std::span<const cplx> coeffs, double y)
{
    const std::size_t n = coeffs.size();
    const long half = static_cast<long>(n / 2);
    cplx s = coeffs[0];
    for (long k = 1; k < half; ++k) {
        const cplx e = std::polar(1.0, double(k) * y);
        s += coeffs[static_cast<std::size_t>(k)] * e + coeffs[n - static_cast<std::size_t>(k)] * std::conj(e);
    }
    s += coeffs[n / 2] * std::cos(double(half) * y);
    return s;
}

cplx interpolate(const ComplexField& f, double y) { return interpolate_coefficients(fourier_coefficients(f.values()), y); }

}  // namespace mhdlab
