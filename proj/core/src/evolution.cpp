#include "mhdlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mhdlab/errors.hpp"

namespace mhdlab {

namespace {

void check_alpha(int alpha) { require(alpha != 0, ErrorKind::zero_wavenumber, "alpha must be nonzero"); }

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// a + s·b, both on the same grid.
ComplexField axpy(const ComplexField& a, cplx s, const ComplexField& b)
{
    std::vector<cplx> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + s * b[j];
    return ComplexField(a.grid(), std::move(v));
}

}  // namespace

FieldPair apply_generator(const SpectralState& state, const ShearProfile& profile)
{
    check_alpha(state.alpha);
    require_same_grid(state.psi_hat, state.phi_hat);
    require(state.grid() == profile.grid, ErrorKind::grid_mismatch, "state and profile grids differ");

    const PeriodicGrid& g = state.grid();
    const std::size_t n = g.size();
    const double a2 = double(state.alpha) * double(state.alpha);

    const std::vector<cplx> cp = fourier_coefficients(state.psi_hat.values());
    const std::vector<cplx> cf = fourier_coefficients(state.phi_hat.values());
    std::vector<cplx> lap_p(n), lap_f(n), d_p(n), d_f(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = double(g.wavenumber(j));
        const cplx ik = g.is_nyquist(j) ? cplx{} : cplx(0.0, k);
        lap_p[j] = -(k * k + a2) * cp[j];
        lap_f[j] = -(k * k + a2) * cf[j];
        d_p[j] = ik * cp[j];
        d_f[j] = ik * cf[j];
    }
    lap_p = from_fourier(lap_p);
    lap_f = from_fourier(lap_f);
    d_p = from_fourier(d_p);
    d_f = from_fourier(d_f);

    const auto psi = state.psi_hat.values();
    const auto phi = state.phi_hat.values();
    std::vector<cplx> r1(n), r2(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = profile.u[j], up = profile.u_p[j], upp = profile.u_pp[j];
        const double b = profile.b[j], bp = profile.b_p[j], bpp = profile.b_pp[j];
        r1[j] = upp * psi[j] - u * lap_p[j] - bpp * phi[j] + b * lap_f[j];
        r2[j] = b * lap_p[j] + bpp * psi[j] + 2.0 * bp * d_p[j] - u * lap_f[j] - upp * phi[j] - 2.0 * up * d_f[j];
    }
    // −iα · (−Δ_α⁻¹ r) = iα Δ_α⁻¹ r, and Δ_α⁻¹ is division by −(k² + α²).
    std::vector<cplx> c1 = fourier_coefficients(r1), c2 = fourier_coefficients(r2);
    const cplx ia(0.0, double(state.alpha));
    for (std::size_t j = 0; j < n; ++j) {
        const double k = double(g.wavenumber(j));
        const double inv = -1.0 / (k * k + a2);
        c1[j] *= ia * inv;
        c2[j] *= ia * inv;
    }
    return {ComplexField(g, from_fourier(c1)), ComplexField(g, from_fourier(c2))};
}

double dt_max(const ShearProfile& profile, int alpha)
{
    check_alpha(alpha);
    double zmax = 0.0;
    for (std::size_t j = 0; j < profile.u.size(); ++j)
        zmax = std::max(zmax, std::abs(profile.u[j]) + std::abs(profile.b[j]));
    const double c_grid = max_abs(profile.u_p) + max_abs(profile.b_p) + max_abs(profile.u_pp) + max_abs(profile.b_pp);
    const double a = std::abs(double(alpha));
    return 0.5 / (a * zmax + a * a * c_grid);
}

SpectralState step_rk4(const SpectralState& state, const ShearProfile& profile, double dt)
{
    require(dt >= 0.0 && std::isfinite(dt), ErrorKind::invalid_argument, "dt must be finite and nonnegative");
    const double limit = dt_max(profile, state.alpha);
    require(dt <= limit, ErrorKind::step_too_large,
            "dt = " + std::to_string(dt) + " exceeds dt_max = " + std::to_string(limit));
    if (dt == 0.0) return state;

    auto stage = [&](const SpectralState& base, const FieldPair& k, double h) {
        SpectralState s = base;
        s.psi_hat = axpy(base.psi_hat, h, k.first);
        s.phi_hat = axpy(base.phi_hat, h, k.second);
        return s;
    };
    const FieldPair k1 = apply_generator(state, profile);
    const FieldPair k2 = apply_generator(stage(state, k1, 0.5 * dt), profile);
    const FieldPair k3 = apply_generator(stage(state, k2, 0.5 * dt), profile);
    const FieldPair k4 = apply_generator(stage(state, k3, dt), profile);

    SpectralState out = state;
    const std::size_t n = state.psi_hat.size();
    std::vector<cplx> p(n), f(n);
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < n; ++j) {
        p[j] = state.psi_hat[j] + w * (k1.first[j] + 2.0 * k2.first[j] + 2.0 * k3.first[j] + k4.first[j]);
        f[j] = state.phi_hat[j] + w * (k1.second[j] + 2.0 * k2.second[j] + 2.0 * k3.second[j] + k4.second[j]);
    }
    out.psi_hat = ComplexField(state.grid(), std::move(p));
    out.phi_hat = ComplexField(state.grid(), std::move(f));
    out.t = state.t + dt;
    return out;
}

std::vector<SpectralState> evolve(const SpectralState& initial, const ShearProfile& profile, double T, double dt,
                                  int sample_every)
{
    require(T >= 0.0 && std::isfinite(T), ErrorKind::invalid_argument, "T must be finite and nonnegative");
    require(dt > 0.0, ErrorKind::invalid_argument, "dt must be positive");
    require(sample_every >= 1, ErrorKind::invalid_argument, "sample_every must be >= 1");
    require(dt <= dt_max(profile, initial.alpha), ErrorKind::step_too_large,
            "dt = " + std::to_string(dt) + " exceeds dt_max = " + std::to_string(dt_max(profile, initial.alpha)));

    std::vector<SpectralState> snaps{initial};
    if (T == 0.0) return snaps;
    const auto steps = static_cast<long>(std::ceil(T / dt - 1e-9));
    SpectralState s = initial;
    for (long i = 1; i <= steps; ++i) {
        const double target = initial.t + std::min(T, double(i) * dt);
        s = step_rk4(s, profile, target - s.t);
        s.t = target;
        if (i % sample_every == 0 || i == steps) snaps.push_back(s);
    }
    return snaps;
}

PrimitiveFields primitive_fields(const SpectralState& state)
{
    const cplx mia(0.0, -double(state.alpha));
    return {derivative(state.psi_hat, 1), state.psi_hat * mia, derivative(state.phi_hat, 1), state.phi_hat * mia};
}

FieldPair vorticity_current(const SpectralState& state)
{
    return {laplacian_alpha(state.psi_hat, state.alpha) * cplx(-1.0), laplacian_alpha(state.phi_hat, state.alpha) * cplx(-1.0)};
}

ToyState toy_from_state(const SpectralState& state)
{
    const ComplexField u1 = derivative(state.psi_hat, 1), h1 = derivative(state.phi_hat, 1);
    return {state.alpha, u1 + h1, u1 - h1, state.t};
}

ToyState toy_evolve(const ToyState& initial, const ShearProfile& profile, double t)
{
    require(initial.z1_plus.grid() == profile.grid, ErrorKind::grid_mismatch, "toy state and profile grids differ");
    ToyState out = initial;
    const double a = double(initial.alpha);
    for (std::size_t j = 0; j < profile.u.size(); ++j) {
        out.z1_plus[j] *= std::polar(1.0, -a * (profile.u[j] - profile.b[j]) * t);
        out.z1_minus[j] *= std::polar(1.0, -a * (profile.u[j] + profile.b[j]) * t);
    }
    out.t = initial.t + t;
    return out;
}

FieldPair toy_horizontal(const ToyState& state)
{
    return {(state.z1_plus + state.z1_minus) * cplx(0.5), (state.z1_plus - state.z1_minus) * cplx(0.5)};
}

InitialFamily parse_initial_family(std::string_view name)
{
    if (name == "band-limited-random" || name == "random") return InitialFamily::band_limited_random;
    if (name == "single-mode") return InitialFamily::single_mode;
    if (name == "gaussian-bump") return InitialFamily::gaussian_bump;
    fail(ErrorKind::invalid_argument, "unknown initial-data family '" + std::string(name) + "'");
}

std::string_view initial_family_name(InitialFamily f) noexcept
{
    switch (f) {
    case InitialFamily::band_limited_random: return "band-limited-random";
    case InitialFamily::single_mode: return "single-mode";
    case InitialFamily::gaussian_bump: return "gaussian-bump";
    }
    return "band-limited-random";
}

SpectralState make_initial(const InitialSpec& spec, const ElsasserPair& pair, int alpha)
{
    check_alpha(alpha);
    const PeriodicGrid g = pair.profile.grid;
    const std::size_t n = g.size();
    std::vector<cplx> psi(n), phi(n);

    switch (spec.family) {
    case InitialFamily::band_limited_random: {
        require(spec.bandwidth >= 0 && 2 * spec.bandwidth < static_cast<int>(n), ErrorKind::invalid_argument,
                "bandwidth must fit on the grid");
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> normal;
        for (std::vector<cplx>* field : {&psi, &phi}) {
            std::vector<cplx> c(n);
            for (int k = -spec.bandwidth; k <= spec.bandwidth; ++k) {
                const double re = normal(rng), im = normal(rng);
                const double scale = std::pow(1.0 + double(k) * double(k), -0.5 * spec.decay_power);
                c[static_cast<std::size_t>((k + long(n)) % long(n))] = scale * cplx(re, im);
            }
            *field = from_fourier(c);
        }
        break;
    }
    case InitialFamily::single_mode:
        for (std::size_t j = 0; j < n; ++j) {
            psi[j] = std::polar(1.0, double(spec.mode) * g.node(j));
            phi[j] = spec.phi_scale * psi[j];
        }
        break;
    case InitialFamily::gaussian_bump:
        require(spec.width > 0.0, ErrorKind::invalid_argument, "bump width must be positive");
        for (std::size_t j = 0; j < n; ++j) {
            // Periodic bump: exp((cos(y − c) − 1)/w²) ≈ exp(−(y − c)²/(2w²)) near the center.
            psi[j] = std::exp((std::cos(g.node(j) - spec.center) - 1.0) / (spec.width * spec.width));
            phi[j] = spec.phi_scale * psi[j];
        }
        break;
    }

    if (spec.vanish_at_critical) {
        std::vector<double> ys;
        for (const CriticalPoint& cp : find_critical_points(pair).points) {
            if (std::none_of(ys.begin(), ys.end(), [&](double y) { return std::abs(y - cp.y0) < 1e-9; }))
                ys.push_back(cp.y0);
        }
        for (std::size_t j = 0; j < n; ++j) {
            double w = 1.0;
            for (double y0 : ys) {
                const double s = std::sin(0.5 * (g.node(j) - y0));
                w *= s * s;
            }
            psi[j] *= w;
            phi[j] *= w;
        }
    }
    return {alpha, ComplexField(g, std::move(psi)), ComplexField(g, std::move(phi)), 0.0};
}

}  // namespace mhdlab
