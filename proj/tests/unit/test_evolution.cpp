#include "support.hpp"

#include "mhdlab/errors.hpp"

using namespace mhdlab;
using test::pi;

namespace {

using Matrix = std::vector<std::vector<cplx>>;

// Spectral operator Σ_k m(k) e^{ik(y_j − y_l)}/n as a dense matrix.
Matrix multiplier_matrix(std::size_t n, const std::function<cplx(long)>& m)
{
    const PeriodicGrid g(n);
    Matrix a(n, std::vector<cplx>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
            cplx s = 0.0;
            for (std::size_t q = 0; q < n; ++q) {
                const long k = g.wavenumber(q);
                s += m(k) * std::polar(1.0, double(k) * (g.node(j) - g.node(l)));
            }
            a[j][l] = s / double(n);
        }
    return a;
}

Matrix product(const Matrix& a, const Matrix& b)
{
    const std::size_t n = a.size();
    Matrix c(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Matrix diag_times(std::span<const double> d, const Matrix& a)
{
    Matrix c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (auto& x : c[i]) x *= d[i];
    return c;
}

std::vector<cplx> apply(const Matrix& a, std::span<const cplx> x)
{
    std::vector<cplx> y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

SpectralState random_state(PeriodicGrid g, int alpha, unsigned seed, int kmax = 6)
{
    return {alpha, test::random_field(g, kmax, seed), test::random_field(g, kmax, seed + 100), 0.0};
}

}  // namespace

TEST_CASE("constant-coefficient generator")
{
    const ShearProfile p = test::constant_profile(64);
    const SpectralState s = random_state(p.grid, 1, 1);
    const FieldPair d = apply_generator(s, p);
    // ∂ψ = iαφ, ∂φ = iαψ
    CHECK(linf_norm(d.first - cplx(0, 1) * s.phi_hat) < 1e-13);
    CHECK(linf_norm(d.second - cplx(0, 1) * s.psi_hat) < 1e-13);
    const SpectralState sym{1, s.psi_hat, s.psi_hat, 0.0};
    const FieldPair e = apply_generator(sym, p);
    CHECK(linf_norm(e.first - e.second) < 1e-13);
}

TEST_CASE("generator matches a dense assembly of the operator matrix")
{
    const std::size_t n = 64;
    const ShearProfile p = test::default_profile(n);
    for (int alpha : {1, 2}) {
        const double a2 = double(alpha) * alpha;
        const Matrix d1 = multiplier_matrix(n, [n](long k) { return k == -long(n) / 2 ? cplx(0) : cplx(0, double(k)); });
        const Matrix lap = multiplier_matrix(n, [a2](long k) { return cplx(-double(k) * k - a2); });
        const Matrix inv = multiplier_matrix(n, [a2](long k) { return cplx(-1.0 / (double(k) * k + a2)); });
        Matrix a11 = diag_times(p.u, lap), a12 = diag_times(p.b, lap), a21 = diag_times(p.b, lap),
               a22 = diag_times(p.u, lap);
        const Matrix bd = diag_times(p.b_p, d1), ud = diag_times(p.u_p, d1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double id = i == j ? 1.0 : 0.0;
                a11[i][j] = p.u_pp[i] * id - a11[i][j];
                a12[i][j] = -p.b_pp[i] * id + a12[i][j];
                a21[i][j] = a21[i][j] + p.b_pp[i] * id + 2.0 * bd[i][j];
                a22[i][j] = -a22[i][j] - p.u_pp[i] * id - 2.0 * ud[i][j];
            }
        const Matrix m11 = product(inv, a11), m12 = product(inv, a12), m21 = product(inv, a21), m22 = product(inv, a22);
        const SpectralState s = random_state(p.grid, alpha, 7, 10);
        const auto r1 = apply(m11, s.psi_hat.values()), r2 = apply(m12, s.phi_hat.values());
        const auto r3 = apply(m21, s.psi_hat.values()), r4 = apply(m22, s.phi_hat.values());
        const FieldPair d = apply_generator(s, p);
        double err = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // M = −Δ⁻¹[...] and the rhs is −iαM
            const cplx w1 = cplx(0, double(alpha)) * (r1[j] + r2[j]);
            const cplx w2 = cplx(0, double(alpha)) * (r3[j] + r4[j]);
            err = std::max({err, std::abs(d.first[j] - w1), std::abs(d.second[j] - w2)});
            scale = std::max({scale, std::abs(w1), std::abs(w2)});
        }
        CHECK(err / scale < 1e-10);
    }
}

TEST_CASE("grid mismatch between state and profile")
{
    const ShearProfile p = test::constant_profile(64);
    const SpectralState s = random_state(PeriodicGrid(128), 1, 1);
    CHECK(test::error_of([&] { apply_generator(s, p); }) == ErrorKind::grid_mismatch);
}

TEST_CASE("RK4 against the constant-coefficient closed form")
{
    const ShearProfile p = test::constant_profile(64);
    const ComplexField f = test::random_field(p.grid, 4, 3);
    const SpectralState s0{1, f, ComplexField(p.grid), 0.0};
    const double T = 2.0;
    auto err = [&](double dt) {
        const SpectralState end = evolve(s0, p, T, dt, 1 << 30).back();
        return test::rel_l2(end.psi_hat, std::cos(T) * f);
    };
    const double e1 = err(0.1), e2 = err(0.05);
    CHECK(e1 < 1e-5);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("RK4 order on the sheared profile")
{
    const ShearProfile p = test::default_profile(64);
    const SpectralState s0 = make_initial(InitialSpec{}, elsasser(p), 1);
    const SpectralState ref = evolve(s0, p, 4.0, 0.0125, 1 << 30).back();
    const double e1 = test::state_rel(evolve(s0, p, 4.0, 0.2, 1 << 30).back(), ref);
    const double e2 = test::state_rel(evolve(s0, p, 4.0, 0.1, 1 << 30).back(), ref);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("step size bounds")
{
    const ShearProfile p = test::default_profile(64);
    const SpectralState s = make_initial(InitialSpec{}, elsasser(p), 1);
    const double dmax = dt_max(p, 1);
    CHECK(dmax > 0.05);
    CHECK(test::error_of([&] { step_rk4(s, p, 1.01 * dmax); }) == ErrorKind::step_too_large);
    const SpectralState same = step_rk4(s, p, 0.0);
    CHECK(linf_norm(same.psi_hat - s.psi_hat) == 0.0);
    CHECK(same.t == s.t);
}

TEST_CASE("evolve snapshot schedule")
{
    const ShearProfile p = test::default_profile(64);
    const SpectralState s0 = make_initial(InitialSpec{}, elsasser(p), 1);
    const auto none = evolve(s0, p, 0.0, 0.01, 1);
    REQUIRE(none.size() == 1);
    CHECK(linf_norm(none[0].psi_hat - s0.psi_hat) == 0.0);
    const auto traj = evolve(s0, p, 1.05, 0.1, 5);
    REQUIRE(traj.size() == 4);  // 0, 0.5, 1.0 and the final 1.05
    CHECK(traj[1].t == doctest::Approx(0.5));
    CHECK(traj[2].t == doctest::Approx(1.0));
    CHECK(traj.back().t == doctest::Approx(1.05));
}

TEST_CASE("constant-coefficient evolution conserves the L2 norm")
{
    const ShearProfile p = test::constant_profile(64, 0.0, 1.0);
    const SpectralState s0 = random_state(p.grid, 1, 9);
    const auto traj = evolve(s0, p, 50.0, 0.01, 500);
    const double n0 = std::hypot(l2_norm(s0.psi_hat), l2_norm(s0.phi_hat));
    for (const SpectralState& s : traj)
        CHECK(std::abs(std::hypot(l2_norm(s.psi_hat), l2_norm(s.phi_hat)) - n0) / n0 < 1e-10);
}

TEST_CASE("linearity and conjugation symmetry")
{
    const ShearProfile p = test::default_profile(64);
    const SpectralState x = random_state(p.grid, 1, 1), y = random_state(p.grid, 1, 2);
    const cplx a(0.3, -1.2), b(2.0, 0.5);
    const SpectralState xy{1, a * x.psi_hat + b * y.psi_hat, a * x.phi_hat + b * y.phi_hat, 0.0};
    const SpectralState ex = evolve(x, p, 3.0, 0.05, 1 << 30).back(), ey = evolve(y, p, 3.0, 0.05, 1 << 30).back();
    const SpectralState exy = evolve(xy, p, 3.0, 0.05, 1 << 30).back();
    const SpectralState comb{1, a * ex.psi_hat + b * ey.psi_hat, a * ex.phi_hat + b * ey.phi_hat, 3.0};
    CHECK(test::state_rel(exy, comb) < 1e-12);

    const SpectralState xm{-1, x.psi_hat.conj(), x.phi_hat.conj(), 0.0};
    const SpectralState em = evolve(xm, p, 3.0, 0.05, 1 << 30).back();
    CHECK(linf_norm(em.psi_hat - ex.psi_hat.conj()) < 1e-12);
    CHECK(linf_norm(em.phi_hat - ex.phi_hat.conj()) < 1e-12);
}

TEST_CASE("vertical velocity decays on the sheared profile")
{
    const ShearProfile p = test::default_profile(256);
    const SpectralState s0 = make_initial(InitialSpec{}, elsasser(p), 1);
    const SpectralState end = evolve(s0, p, 200.0, 0.05, 1 << 30).back();
    CHECK(l2_norm(primitive_fields(end).u2) < 0.2 * l2_norm(primitive_fields(s0).u2));
}

TEST_CASE("primitive fields")
{
    const PeriodicGrid g(64);
    const ComplexField e = ComplexField::sample(g, [](double y) { return std::polar(1.0, y); });
    const PrimitiveFields f = primitive_fields({1, e, ComplexField(g), 0.0});
    CHECK(test::max_abs_diff(f.u1, cplx(0, 1) * e) < 1e-12);
    CHECK(test::max_abs_diff(f.u2, cplx(0, -1) * e) < 1e-12);
    CHECK(linf_norm(f.h1) == 0.0);
    CHECK(linf_norm(f.h2) == 0.0);
    for (int alpha : {1, 3}) {
        const SpectralState s = random_state(g, alpha, 4);
        const PrimitiveFields q = primitive_fields(s);
        CHECK(linf_norm(cplx(0, alpha) * q.u1 + derivative(q.u2, 1)) < 1e-12);
        CHECK(linf_norm(cplx(0, alpha) * q.h1 + derivative(q.h2, 1)) < 1e-12);
    }
}

TEST_CASE("vorticity and current")
{
    const PeriodicGrid g(64);
    const ComplexField e = ComplexField::sample(g, [](double y) { return std::polar(1.0, y); });
    CHECK(test::max_abs_diff(vorticity_current({1, e, ComplexField(g), 0.0}).first, 2.0 * e) < 1e-12);
    const ComplexField k = ComplexField::sample(g, [](double) { return cplx(0.7, -0.2); });
    CHECK(test::max_abs_diff(vorticity_current({2, ComplexField(g), k, 0.0}).second, 4.0 * k) < 1e-12);
    const SpectralState s = random_state(g, 2, 5);
    const PrimitiveFields q = primitive_fields(s);
    const FieldPair w = vorticity_current(s);
    // ω = ∂ₓU₂ − ∂ᵧU₁
    CHECK(linf_norm(w.first - (cplx(0, 2) * q.u2 - derivative(q.u1, 1))) < 1e-11);
    CHECK(linf_norm(w.second - (cplx(0, 2) * q.h2 - derivative(q.h1, 1))) < 1e-11);
}

TEST_CASE("toy model")
{
    const ShearProfile p = test::default_profile(128);
    const ToyState z0 = toy_from_state(random_state(p.grid, 1, 3));
    const ToyState same = toy_evolve(z0, p, 0.0);
    CHECK(linf_norm(same.z1_plus - z0.z1_plus) == 0.0);
    for (double t : {1.0, 17.0, 400.0}) {
        const ToyState z = toy_evolve(z0, p, t);
        for (std::size_t j = 0; j < p.grid.size(); ++j) {
            CHECK(std::abs(z.z1_plus[j]) == doctest::Approx(std::abs(z0.z1_plus[j])).epsilon(1e-14));
            CHECK(std::abs(z.z1_minus[j]) == doctest::Approx(std::abs(z0.z1_minus[j])).epsilon(1e-14));
            // Ẑ₁⁺ is carried by e^{−iα(u−b)t}
            const cplx want = z0.z1_plus[j] * std::polar(1.0, -(p.u[j] - p.b[j]) * t);
            CHECK(std::abs(z.z1_plus[j] - want) < 1e-12);
        }
    }
    const FieldPair h = toy_horizontal(z0);
    CHECK(linf_norm(h.first + h.second - z0.z1_plus) < 1e-14);
    CHECK(linf_norm(h.first - h.second - z0.z1_minus) < 1e-14);
}

TEST_CASE("initial data families")
{
    const ElsasserPair pair = elsasser(test::default_profile(128));
    InitialSpec spec;
    spec.seed = 5;
    const SpectralState a = make_initial(spec, pair, 1), b = make_initial(spec, pair, 1);
    CHECK(linf_norm(a.psi_hat - b.psi_hat) == 0.0);
    spec.seed = 6;
    CHECK(linf_norm(make_initial(spec, pair, 1).psi_hat - a.psi_hat) > 0.0);

    spec.vanish_at_critical = true;
    const SpectralState v = make_initial(spec, pair, 1);
    for (double y0 : {0.5 * pi, 1.5 * pi}) {
        CHECK(std::abs(interpolate(v.psi_hat, y0)) < 1e-12);
        CHECK(std::abs(interpolate(derivative(v.psi_hat, 1), y0)) < 1e-10);
        CHECK(std::abs(interpolate(v.phi_hat, y0)) < 1e-12);
    }
    InitialSpec single;
    single.family = InitialFamily::single_mode;
    single.mode = 2;
    const SpectralState m = make_initial(single, pair, 1);
    CHECK(linf_norm(derivative(m.psi_hat, 2) + 4.0 * m.psi_hat) < 1e-10);
    CHECK(parse_initial_family(initial_family_name(InitialFamily::gaussian_bump)) == InitialFamily::gaussian_bump);
}
