#include "support.hpp"

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/dunford.hpp"
#include "mhdlab/errors.hpp"

using namespace mhdlab;
using test::pi;

namespace {

cplx cauchy(const ContourSpec& c, cplx z)
{
    cplx s{};
    for (std::size_t k = 0; k < c.nodes.size(); ++k) s += c.weights[k] / (c.nodes[k] - z);
    return s / (2.0 * pi * cplx(0, 1));
}

struct Fixture {
    ShearProfile profile = test::default_profile(128);
    SpectralState s0 = make_initial(InitialSpec{}, elsasser(profile), 1);
};

}  // namespace

TEST_CASE("contour geometry")
{
    const ElsasserPair pair = elsasser(test::default_profile(128));
    const ContourSpec c = build_contour(pair, 0.1);
    CHECK(c.ranges[0].lo == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(c.ranges[0].hi == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(c.ranges[1].lo == doctest::Approx(-1.1).epsilon(1e-12));
    CHECK(c.ranges[1].hi == doctest::Approx(-0.9).epsilon(1e-12));
    REQUIRE(c.nodes.size() == 2 * c.upper);
    for (std::size_t k = 0; k < c.upper; ++k) {
        CHECK(c.nodes[k + c.upper] == std::conj(c.nodes[k]));
        CHECK(c.weights[k + c.upper] == -std::conj(c.weights[k]));
        CHECK(c.nodes[k].imag() >= 0.0);
    }
    for (cplx z : {cplx(1.0), cplx(0.95, 0.05), cplx(-1.08, -0.02), cplx(-0.9)})
        CHECK(std::abs(cauchy(c, z) - 1.0) < 1e-10);
    for (cplx z : {cplx(0.0), cplx(1.0, 0.5), cplx(2.0), cplx(-1.0, -0.3)}) CHECK(std::abs(cauchy(c, z)) < 1e-10);

    const ContourSpec k = build_contour(elsasser(test::constant_profile(64)), 0.1);
    CHECK(k.ranges[0].lo == k.ranges[0].hi);
    CHECK(std::abs(cauchy(k, 1.0) - 1.0) < 1e-10);

    CHECK(test::error_of([&] { build_contour(pair, 0.3); }) == ErrorKind::epsilon_too_large);
    CHECK(test::error_of([&] { build_contour(pair, 0.0); }) == ErrorKind::epsilon_too_large);
}

TEST_CASE("contour reconstruction at t = 0 returns the data")
{
    Fixture f;
    const ContourSpec c = build_contour(elsasser(f.profile), 0.1);
    const SpectralState r = reconstruct_contour(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, 0.0, c);
    CHECK(test::state_rel(r, f.s0) < 1e-6);
}

TEST_CASE("contour reconstruction matches time stepping")
{
    const ShearProfile k = test::constant_profile(64);
    const SpectralState k0{1, test::random_field(k.grid, 6, 1), test::random_field(k.grid, 6, 2), 0.0};
    const SpectralState kt = evolve(k0, k, 1.0, 1e-3, 1000).back();
    CHECK(test::state_rel(reconstruct_contour(k0.psi_hat, k0.phi_hat, k, 1, 1.0, build_contour(elsasser(k), 0.1)), kt) < 1e-6);

    Fixture f;
    const SpectralState ev = evolve(f.s0, f.profile, 5.0, 5e-3, 1000).back();
    const SpectralState r1 = reconstruct_contour(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, 5.0, build_contour(elsasser(f.profile), 0.1), 2);
    CHECK(test::state_rel(r1, ev) < 1e-4);
    const SpectralState r2 = reconstruct_contour(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, 5.0, build_contour(elsasser(f.profile), 0.05), 2);
    CHECK(test::state_rel(r2, r1) < 1e-5);
}

TEST_CASE("contour budget")
{
    Fixture f;
    const ContourSpec c = build_contour(elsasser(f.profile), 0.1);
    CHECK(test::error_of([&] { reconstruct_contour(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, 51.0, c); }) ==
          ErrorKind::epsilon_too_large);
    CHECK(test::error_of([&] { reconstruct_contour(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, -1.0, c); }) ==
          ErrorKind::invalid_argument);
}

TEST_CASE("jump density")
{
    Fixture f;
    const JumpDensity zero = build_jump_density(ComplexField(f.profile.grid), ComplexField(f.profile.grid), f.profile, 1, {}, 2);
    const SpectralState z = reconstruct_jump(zero, f.profile, 3.0);
    CHECK(linf_norm(z.psi_hat) == 0.0);
    CHECK(linf_norm(z.phi_hat) == 0.0);

    const JumpDensity d = build_jump_density(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, {}, 2);
    const SpectralState cont =
        reconstruct_contour(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, 2.0, build_contour(elsasser(f.profile), 0.1), 2);
    CHECK(test::state_rel(reconstruct_jump(d, f.profile, 2.0), cont) < 1e-3);

    std::vector<SpectralState> late;
    for (double t : {50.0, 100.0, 200.0}) late.push_back(reconstruct_jump(d, f.profile, t));
    const NormSeries v = vertical_norms(late);
    CHECK(v.values[1] < v.values[0]);
    CHECK(v.values[2] < v.values[1]);

    CHECK(std::isfinite(d.sup_boundary_norm));
    CHECK(d.sup_boundary_norm > 0.0);
    // the boundary values are bounded by a fixed multiple of the data
    CHECK(d.sup_boundary_norm < 100.0 * (h1_norm(f.s0.psi_hat) + h1_norm(f.s0.phi_hat)));
    CHECK(d.panel_lo.size() * 16 == d.c_samples.size());
}

TEST_CASE("jump density rejects bad options and grids")
{
    Fixture f;
    JumpOptions bad;
    bad.levels = 1;
    CHECK(test::error_of([&] { build_jump_density(f.s0.psi_hat, f.s0.phi_hat, f.profile, 1, bad); }) ==
          ErrorKind::invalid_argument);
}
