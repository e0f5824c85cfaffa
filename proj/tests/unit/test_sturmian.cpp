#include "support.hpp"

#include <map>

#include "mhdlab/errors.hpp"
#include "mhdlab/evolution.hpp"
#include "mhdlab/sturmian.hpp"

using namespace mhdlab;
using test::pi;

namespace {

// (c − M)x for the generator used by evolve: M x = (i/α)·apply_generator(x).
FieldPair c_minus_m(cplx c, const ComplexField& psi, const ComplexField& phi, const ShearProfile& p, int alpha)
{
    const FieldPair g = apply_generator({alpha, psi, phi, 0.0}, p);
    const cplx s = cplx(0, 1) / double(alpha);
    return {c * psi - s * g.first, c * phi - s * g.second};
}

ComplexField mode(PeriodicGrid g, int k) { return ComplexField::sample(g, [k](double y) { return std::polar(1.0, k * y); }); }

}  // namespace

TEST_CASE("right-hand side F")
{
    const ShearProfile p0 = test::constant_profile(64);
    const ComplexField e = mode(p0.grid, 1);
    const ComplexField zero(p0.grid);
    // ψ̂₀ = 0: only the (u − c)Δ(φ̂₀/b) term survives
    CHECK(test::max_abs_diff(rhs_F(zero, e, p0, 1, cplx(0, 1)), cplx(0, -2) * e) < 1e-12);

    const ShearProfile p = test::default_profile(128);
    const ComplexField psi = test::random_field(p.grid, 8, 1);
    CHECK(linf_norm(rhs_F(psi, ComplexField(p.grid), p, 1, cplx(0.3, 0.2)) + laplacian_alpha(psi, 1)) < 1e-12);

    const RhsParts parts = rhs_parts(psi, test::random_field(p.grid, 8, 2), p, 1);
    const cplx c(0.95, 0.05);
    CHECK(linf_norm(parts.at(c) - (parts.f0 + c * parts.f1)) < 1e-13);
}

TEST_CASE("F assembled two ways for u = 0 and c = 0")
{
    const ShearProfile p =
        build_profile(ProfileSpec::constant(0.0), ProfileSpec::cosine(1.0, 0.2), PeriodicGrid(128));
    const ComplexField phi0 = test::random_field(p.grid, 8, 3);
    const ComplexField psi0 = phi0 * std::span<const double>(p.b);
    // −Δ(bφ̂₀) − (0 − 0)·(…) + 0
    ComplexField direct = -1.0 * laplacian_alpha(psi0, 1);
    CHECK(linf_norm(rhs_F(psi0, phi0, p, 1, 0.0) - direct) < 1e-11);
}

TEST_CASE("the resolvent built from F inverts c − M")
{
    const ShearProfile p = test::default_profile(128);
    const ComplexField psi0 = test::random_field(p.grid, 8, 4), phi0 = test::random_field(p.grid, 8, 5);
    for (cplx c : {cplx(1.0, 0.1), cplx(-0.95, -0.2), cplx(0.0, 0.5)}) {
        const ResolventSample s = solve_resolvent_direct(rhs_F(psi0, phi0, p, 1, c), p, 1, c);
        ComplexField psi1 = s.phi, phi1 = s.phi;
        for (std::size_t j = 0; j < p.grid.size(); ++j) {
            psi1[j] = (p.u[j] - c) * s.phi[j] + phi0[j] / p.b[j];
            phi1[j] = p.b[j] * s.phi[j];
        }
        const FieldPair back = c_minus_m(c, psi1, phi1, p, 1);
        CHECK(test::rel_l2(back.first, psi0) < 1e-9);
        CHECK(test::rel_l2(back.second, phi0) < 1e-9);
    }
}

TEST_CASE("direct solve: zero data and the constant-coefficient oracle")
{
    const ShearProfile p = test::constant_profile(64);
    const ResolventSample z = solve_resolvent_direct(ComplexField(p.grid), p, 1, cplx(0, 2));
    CHECK(linf_norm(z.phi) == 0.0);
    // H = (−1 − c)(1 − c) = c² − 1 = −5 for c = 2i; H(Φ″ − Φ) = e^{iy} gives Φ = e^{iy}/10
    const ComplexField e = mode(p.grid, 1);
    const ResolventSample s = solve_resolvent_direct(e, p, 1, cplx(0, 2));
    CHECK(test::max_abs_diff(s.phi, 0.1 * e) < 1e-13);
    const FluxResiduals fr = flux_residuals(s, p);
    CHECK(fr.eq1 < 1e-10);
    CHECK(fr.eq2 < 1e-10);
}

TEST_CASE("flux identities on the sheared profile")
{
    const ShearProfile p = test::default_profile(256);
    const ComplexField f = test::random_field(p.grid, 10, 6);
    const ResolventSample s = solve_resolvent_direct(f, p, 1, cplx(1.0, 0.1));
    const FluxResiduals fr = flux_residuals(s, p);
    CHECK(fr.eq1 < 1e-8);
    CHECK(fr.eq2 < 1e-8);
    CHECK(s.condition > 1.0);
}

TEST_CASE("near-singular solves are reported")
{
    // u = 0, b = 1: H = c² − 1 vanishes identically at c = 1
    const ShearProfile p = test::constant_profile(64);
    const ComplexField f = test::random_field(p.grid, 4, 7);
    CHECK(test::error_of([&] { solve_resolvent_direct(f, p, 1, cplx(1.0, 0.0)); }) == ErrorKind::near_singular);
}

TEST_CASE("uniform scan")
{
    const ShearProfile p = test::default_profile(128);
    const ComplexField f = test::random_field(p.grid, 6, 8);
    const RhsFamily fam = [&f](const PeriodicGrid&, cplx) { return f; };
    const std::vector<cplx> far{cplx(0.0, 1.0)};
    CHECK(resolvent_uniform_scan(fam, p, 1, far).max_ratio < 5.0);

    const RhsFamily zero = [](const PeriodicGrid& g, cplx) { return ComplexField(g); };
    const std::vector<cplx> cs{cplx(1.0, 0.1), cplx(-1.0, -0.05)};
    const ScanTable zt = resolvent_uniform_scan(zero, p, 1, cs);
    for (const ScanRow& r : zt.rows) CHECK(r.ratio == 0.0);
    const std::vector<cplx> real{cplx(1.0, 0.0)};
    CHECK(test::error_of([&] { resolvent_uniform_scan(fam, p, 1, real); }) == ErrorKind::invalid_argument);
    CHECK(strip_half_width(p) == doctest::Approx(0.3));
}

TEST_CASE("scan toward a monotone value stays bounded")
{
    // Z₊ = 1 at y = 0 and π, both with |Z₊′| = 0.1. The pole width is ε/0.1, so ε = 1e−3 needs n = 2048.
    const ShearProfile p = test::default_profile(2048);
    const ComplexField f = test::random_field(p.grid, 6, 9);
    const RhsFamily fam = [&f](const PeriodicGrid&, cplx) { return f; };
    const std::vector<cplx> cs{cplx(1.0, 1e-1), cplx(1.0, 1e-2), cplx(1.0, 1e-3)};
    const ScanTable t = resolvent_uniform_scan(fam, p, 1, cs, 3);
    CHECK(t.rows[2].ratio < 4.0 * t.rows[0].ratio);
    CHECK(t.rows[2].ratio - t.rows[1].ratio < 0.5 * (t.rows[1].ratio - t.rows[0].ratio));
}

TEST_CASE("shifted scan ordering is independent of jobs")
{
    const ShearProfile p = test::default_profile(128);
    const ComplexField f = test::random_field(p.grid, 6, 10);
    const RhsFamily fam = [&f](const PeriodicGrid&, cplx) { return f; };
    const std::vector<cplx> cs{cplx(0.9, 0.1), cplx(1.05, 0.2), cplx(-1.0, 0.3), cplx(-0.95, -0.1)};
    const ScanTable a = resolvent_uniform_scan(fam, p, 1, cs, 1), b = resolvent_uniform_scan(fam, p, 1, cs, 3);
    for (std::size_t i = 0; i < cs.size(); ++i) CHECK(a.rows[i].ratio == b.rows[i].ratio);
}

TEST_CASE("boundary limits at a monotone value")
{
    const ShearProfile p = test::default_profile(1024);
    const ComplexField f = test::random_field(p.grid, 6, 11);
    const RhsFamily fam = [&f](const PeriodicGrid& g, cplx) {
        REQUIRE(g.size() == 1024);
        return f;
    };
    const std::vector<double> eps{0.08, 0.04, 0.02, 0.01, 0.005};
    const BoundaryLimits bl = boundary_limits(fam, p, 1, 1.0, eps);
    for (std::size_t k = 1; k < bl.d_plus.size(); ++k) {
        CHECK(bl.d_plus[k] < bl.d_plus[k - 1]);
        CHECK(bl.d_minus[k] < bl.d_minus[k - 1]);
    }
    CHECK(l2_norm(bl.phi_plus - bl.phi_minus) > 1e-3 * l2_norm(bl.phi_plus));
    const std::vector<cplx> off{cplx(1.0, 0.3), cplx(1.0, -0.3), cplx(0.9, 0.1), cplx(1.1, -0.1)};
    const double c_scan = resolvent_uniform_scan(fam, p, 1, off).max_ratio;
    const double bound = c_scan * h1_norm(f);
    // the scan constant is empirical; allow the boundary an order of magnitude over it
    CHECK(l2_norm(bl.phi_plus) <= 10.0 * bound);
    CHECK(l2_norm(bl.phi_minus) <= 10.0 * bound);

    const RhsFamily zero = [](const PeriodicGrid& g, cplx) { return ComplexField(g); };
    const BoundaryLimits z = boundary_limits(zero, p, 1, 1.0, eps);
    CHECK(linf_norm(z.phi_plus) == 0.0);
    CHECK(linf_norm(z.phi_minus) == 0.0);
}

namespace {

struct DepletionFixture {
    ShearProfile profile = test::default_profile(256);
    CriticalPoint cp;
    std::map<std::size_t, RhsParts> parts;
    RhsFamily f;
    std::vector<double> eps{1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3, 1e-3, 3.1622776601683794e-4, 1e-4};
    std::vector<std::size_t> sizes{256, 256, 512, 512, 1024, 2048, 2048};
    DepletionResult result;

    DepletionFixture()
    {
        for (const CriticalPoint& q : find_critical_points(elsasser(profile)).points)
            if (q.side == Side::plus && q.z_pp > 0.0) cp = q;
        for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
            const ShearProfile pn = test::default_profile(n);
            const SpectralState s0 = make_initial(InitialSpec{}, elsasser(pn), 1);
            parts.emplace(n, rhs_parts(s0.psi_hat, s0.phi_hat, pn, 1));
        }
        f = [this](const PeriodicGrid& g, cplx c) { return parts.at(g.size()).at(c); };
        result = depletion_exponents(profile, 1, cp, f, eps, sizes, cp.y0 + pi / 4, 3, false);
    }
};

const DepletionFixture& depletion()
{
    static const DepletionFixture d;
    return d;
}

}  // namespace

TEST_CASE("depletion scan: derivative exponent at the Z+ minimum")
{
    const DepletionResult& d = depletion().result;
    CHECK(d.p_dphi >= -0.80);
    CHECK(d.residual_dphi <= 0.1);
}

TEST_CASE("depletion scan: value exponent at the Z+ minimum")
{
    // bounded below by −1/4 − 0.05, with a stable fit
    const DepletionResult& d = depletion().result;
    CHECK(d.p_phi >= -0.30);
    CHECK(d.residual_phi <= 0.1);
}

TEST_CASE("depletion scan: the monotone control point stays bounded")
{
    // |Φ(y_c)| saturates once ε is below the distance to the critical value
    const std::vector<DepletionRow>& r = depletion().result.rows;
    for (std::size_t k = 4; k < r.size(); ++k)
        CHECK(std::abs(r[k].abs_phi_control - r[3].abs_phi_control) < 0.05 * r[3].abs_phi_control);
}

TEST_CASE("depletion scan: the fit gate matches the residuals")
{
    const DepletionFixture& d = depletion();
    const bool unstable = d.result.residual_phi > 0.1 || d.result.residual_dphi > 0.1;
    if (unstable)
        CHECK(test::error_of([&] { depletion_exponents(d.profile, 1, d.cp, d.f, d.eps, d.sizes, d.cp.y0 + pi / 4, 3); }) ==
              ErrorKind::fit_unstable);
    else
        CHECK_NOTHROW(depletion_exponents(d.profile, 1, d.cp, d.f, d.eps, d.sizes, d.cp.y0 + pi / 4, 3));
    const std::vector<double> rising{1e-3, 1e-2};
    CHECK(test::error_of([&] { depletion_exponents(d.profile, 1, d.cp, d.f, rising, d.sizes, 0.0); }) ==
          ErrorKind::invalid_argument);
}
