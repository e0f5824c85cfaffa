#pragma once

#include <cmath>
#include <random>

#include <doctest.h>

#include "mhdlab/errors.hpp"
#include "mhdlab/evolution.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/profiles.hpp"

namespace test {

using mhdlab::ComplexField;
using mhdlab::cplx;
using mhdlab::PeriodicGrid;

inline constexpr double pi = 3.14159265358979323846;

// Smooth random field with modes |k| ≤ kmax and algebraic decay.
inline ComplexField random_field(PeriodicGrid g, int kmax, unsigned seed, double decay = 2.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> coef(g.size());
    for (int k = -kmax; k <= kmax; ++k) {
        const double w = std::pow(1.0 + double(k) * k, -decay / 2.0);
        const double a = nd(rng), b = nd(rng);
        coef[std::size_t((k + long(g.size())) % long(g.size()))] = w * cplx(a, b);
    }
    return ComplexField(g, mhdlab::from_fourier(coef));
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b)
{
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

inline double rel_l2(const ComplexField& got, const ComplexField& want)
{
    return mhdlab::l2_norm(got - want) / mhdlab::l2_norm(want);
}

inline double state_rel(const mhdlab::SpectralState& got, const mhdlab::SpectralState& want)
{
    const double num = std::hypot(mhdlab::l2_norm(got.psi_hat - want.psi_hat), mhdlab::l2_norm(got.phi_hat - want.phi_hat));
    return num / std::hypot(mhdlab::l2_norm(want.psi_hat), mhdlab::l2_norm(want.phi_hat));
}

inline mhdlab::ShearProfile default_profile(std::size_t n = 256)
{
    return mhdlab::build_profile(mhdlab::ProfileSpec::sine(0.0, 0.1), mhdlab::ProfileSpec::constant(1.0), PeriodicGrid(n));
}

inline mhdlab::ShearProfile constant_profile(std::size_t n = 128, double u = 0.0, double b = 1.0)
{
    return mhdlab::build_profile(mhdlab::ProfileSpec::constant(u), mhdlab::ProfileSpec::constant(b), PeriodicGrid(n));
}

template <class F>
mhdlab::ErrorKind error_of(F&& f)
{
    try {
        f();
    } catch (const mhdlab::Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return mhdlab::ErrorKind::invalid_argument;
}

}  // namespace test
