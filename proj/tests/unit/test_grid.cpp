#include "support.hpp"

#include "mhdlab/errors.hpp"

using namespace mhdlab;
using test::pi;

namespace {

ComplexField mode(PeriodicGrid g, int k) { return ComplexField::sample(g, [k](double y) { return std::polar(1.0, k * y); }); }

// 8th-order central difference, periodic wrap
ComplexField fd8(const ComplexField& f)
{
    static const double c[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    const std::size_t n = f.size();
    const double h = f.grid().spacing();
    ComplexField out(f.grid());
    for (std::size_t j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (std::size_t m = 1; m <= 4; ++m) s += c[m - 1] * (f[(j + m) % n] - f[(j + n - m) % n]);
        out[j] = s / h;
    }
    return out;
}

}  // namespace

TEST_CASE("grid construction")
{
    const PeriodicGrid g(64);
    CHECK(g.size() == 64);
    CHECK(g.node(16) == doctest::Approx(pi / 2));
    CHECK(g.wavenumber(31) == 31);
    CHECK(g.wavenumber(32) == -32);
    CHECK(g.is_nyquist(32));
    CHECK(test::error_of([] { PeriodicGrid(48); }) == ErrorKind::invalid_argument);
    CHECK(test::error_of([] { PeriodicGrid(32); }) == ErrorKind::invalid_argument);
    const auto nodes = g.nodes();
    for (std::size_t j = 1; j < nodes.size(); ++j) CHECK(std::abs(nodes[j] - nodes[j - 1] - g.spacing()) < 1e-14);
}

TEST_CASE("fields reject non-finite values and mismatched grids")
{
    const PeriodicGrid g(64);
    std::vector<cplx> v(64, 1.0);
    v[3] = cplx(std::nan(""), 0.0);
    CHECK(test::error_of([&] { ComplexField(g, v); }) == ErrorKind::non_finite_field);
    CHECK(test::error_of([&] { ComplexField(g, std::vector<cplx>(10)); }) == ErrorKind::grid_mismatch);
    const ComplexField a(g), b(PeriodicGrid(128));
    CHECK(test::error_of([&] { (void)(a + b); }) == ErrorKind::grid_mismatch);
}

TEST_CASE("spectral derivatives of single modes")
{
    const PeriodicGrid g(64);
    const ComplexField e = mode(g, 1);
    CHECK(test::max_abs_diff(derivative(e, 1), cplx(0, 1) * e) < 1e-12);
    const ComplexField c3 = ComplexField::sample(g, [](double y) { return std::cos(3 * y); });
    CHECK(test::max_abs_diff(derivative(c3, 2), -9.0 * c3) < 1e-11);
    CHECK(test::error_of([&] { derivative(e, 3); }) == ErrorKind::invalid_argument);
}

TEST_CASE("odd derivatives zero the Nyquist mode")
{
    const PeriodicGrid g(64);
    const ComplexField ny = ComplexField::sample(g, [](double y) { return std::cos(32 * y); });
    CHECK(linf_norm(derivative(ny, 1)) < 1e-12);
    CHECK(test::max_abs_diff(derivative(ny, 2), -1024.0 * ny) < 1e-9);
}

TEST_CASE("derivative agrees with an 8th-order finite-difference oracle")
{
    double prev = 0.0;
    for (std::size_t n : {64u, 128u, 256u}) {
        const ComplexField f = test::random_field(PeriodicGrid(n), 6, 11);
        const double err = linf_norm(derivative(f, 1) - fd8(f));
        if (prev > 0.0) CHECK(prev / err > 150.0);  // 2^8 = 256 ideally
        prev = err;
    }
    CHECK(prev < 1e-9);
}

TEST_CASE("modified Helmholtz operator and its inverse")
{
    const PeriodicGrid g(64);
    const ComplexField e = mode(g, 1);
    CHECK(test::max_abs_diff(laplacian_alpha(e, 1), -2.0 * e) < 1e-12);
    const ComplexField one = ComplexField::sample(g, [](double) { return cplx(1.0); });
    CHECK(test::max_abs_diff(laplacian_alpha(one, 2), -4.0 * one) < 1e-12);
    CHECK(test::max_abs_diff(invert_laplacian_alpha(e, 1), -0.5 * e) < 1e-12);
    CHECK(test::max_abs_diff(invert_laplacian_alpha(-4.0 * one, 2), one) < 1e-12);
    CHECK(test::error_of([&] { laplacian_alpha(e, 0); }) == ErrorKind::zero_wavenumber);
    CHECK(test::error_of([&] { invert_laplacian_alpha(e, 0); }) == ErrorKind::zero_wavenumber);
}

TEST_CASE("Helmholtz inverse pair and residual on random fields")
{
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const ComplexField f = test::random_field(PeriodicGrid(128), 20, seed);
        for (int a : {1, 2, -3}) {
            CHECK(linf_norm(invert_laplacian_alpha(laplacian_alpha(f, a), a) - f) < 1e-12);
            const ComplexField g = invert_laplacian_alpha(f, a);
            CHECK(linf_norm(laplacian_alpha(g, a) - f) < 1e-11);
            CHECK(l2_norm(g) <= l2_norm(f) / double(a * a) * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("Parseval")
{
    const ComplexField f = test::random_field(PeriodicGrid(256), 30, 3);
    CHECK(l2_norm(f) == doctest::Approx(fourier_l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("operators commute with grid translations")
{
    const PeriodicGrid g(128);
    const ComplexField f = test::random_field(g, 12, 5);
    const std::size_t shift = 17;
    auto translate = [&](const ComplexField& x) {
        ComplexField out(g);
        for (std::size_t j = 0; j < g.size(); ++j) out[j] = x[(j + shift) % g.size()];
        return out;
    };
    CHECK(linf_norm(translate(derivative(f, 1)) - derivative(translate(f), 1)) < 1e-11);
    CHECK(linf_norm(translate(derivative(f, 2)) - derivative(translate(f), 2)) < 1e-10);
    CHECK(linf_norm(translate(invert_laplacian_alpha(f, 1)) - invert_laplacian_alpha(translate(f), 1)) < 1e-12);
}

TEST_CASE("trigonometric interpolation is exact for band-limited fields")
{
    const PeriodicGrid g(64);
    const ComplexField f = ComplexField::sample(g, [](double y) { return std::cos(3 * y) + cplx(0, 1) * std::sin(5 * y); });
    for (double y : {0.1, 1.234, 4.71238898, 6.2}) {
        const cplx want = std::cos(3 * y) + cplx(0, 1) * std::sin(5 * y);
        CHECK(std::abs(interpolate(f, y) - want) < 1e-13);
    }
}

TEST_CASE("Sobolev norms")
{
    const PeriodicGrid g(64);
    const ComplexField e = mode(g, 3);
    const double l2 = l2_norm(e);
    CHECK(sobolev_norm(e, -1.0) == doctest::Approx(l2 / std::sqrt(10.0)).epsilon(1e-12));
    CHECK(sobolev_norm(e, 3.0) == doctest::Approx(l2 * std::pow(10.0, 1.5)).epsilon(1e-12));
}
