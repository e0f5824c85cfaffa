#include "support.hpp"

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/errors.hpp"

using namespace mhdlab;
using test::pi;

namespace {

NormSeries series(const std::string& label, double t0, double t1, int n, const std::function<double(double)>& f,
                  bool log_spaced = true)
{
    NormSeries s{label, {}, {}, 0};
    for (int i = 0; i < n; ++i) {
        const double x = double(i) / (n - 1);
        const double t = log_spaced ? t0 * std::pow(t1 / t0, x) : t0 + (t1 - t0) * x;
        s.push(t, f(t));
    }
    return s;
}

ComplexField zero_mean(ComplexField f)
{
    std::vector<cplx> c = fourier_coefficients(f.values());
    c[0] = 0.0;
    return ComplexField(f.grid(), from_fourier(c));
}

}  // namespace

TEST_CASE("vertical norms")
{
    const ShearProfile p = test::default_profile(128);
    const SpectralState zero{1, ComplexField(p.grid), ComplexField(p.grid), 0.0};
    for (double v : vertical_norms(evolve(zero, p, 1.0, 0.1, 1)).values) CHECK(v == 0.0);

    // constant coefficients: no decay
    const ShearProfile k = test::constant_profile(64);
    const SpectralState k0{1, test::random_field(k.grid, 4, 1), test::random_field(k.grid, 4, 2), 0.0};
    const NormSeries kv = vertical_norms(evolve(k0, k, 50.0, 0.05, 20));
    CHECK(kv.values.back() > 0.5 * kv.values.front());

    const SpectralState s0 = make_initial(InitialSpec{}, elsasser(p), 1);
    const NormSeries sv = vertical_norms(evolve(s0, p, 200.0, 0.05, 200));
    CHECK(sv.values.back() < 0.3 * sv.values.front());
}

TEST_CASE("space-time accumulator")
{
    const ShearProfile p = test::default_profile(128);
    const SpectralState zero{1, ComplexField(p.grid), ComplexField(p.grid), 0.0};
    const SpacetimeSeries z = spacetime_accumulator(evolve(zero, p, 1.0, 0.1, 1), p);
    CHECK(z.running.values.back() == 0.0);
    CHECK(z.ratio() == 0.0);

    const SpectralState s0 = make_initial(InitialSpec{}, elsasser(p), 1);
    const SpacetimeSeries acc = spacetime_accumulator(evolve(s0, p, 200.0, 0.05, 20), p);
    CHECK(acc.increment(100.0, 200.0) < 0.5 * acc.increment(0.0, 100.0));
    CHECK(acc.ratio() > 0.0);
    CHECK(test::error_of([&] { acc.increment(0.0, 100.01); }) == ErrorKind::invalid_argument);

    // constant coefficients: the integrand is conserved, so growth is linear
    const ShearProfile k = test::constant_profile(64);
    const SpectralState k0{1, test::random_field(k.grid, 4, 1), test::random_field(k.grid, 4, 2), 0.0};
    const SpacetimeSeries kacc = spacetime_accumulator(evolve(k0, k, 20.0, 0.05, 10), k);
    CHECK(kacc.increment(10.0, 20.0) == doctest::Approx(kacc.increment(0.0, 10.0)).epsilon(1e-6));
}

TEST_CASE("depletion traces")
{
    const ShearProfile p = test::default_profile(256);
    const ElsasserPair pair = elsasser(p);
    const SpectralState s0 = make_initial(InitialSpec{}, pair, 1);
    const std::vector<SpectralState> traj = evolve(s0, p, 200.0, 0.05, 100);
    // Z₊′ vanishes at y = π/2; y = 0 is a monotone point
    const std::vector<double> pts{pi / 2, 0.0};
    const std::vector<NormSeries> d = depletion_trace(traj, pts);
    REQUIRE(d.size() == 2);
    CHECK(d[0].values.back() < 0.5 * d[0].values.front());
    CHECK(d[1].values.back() > 0.0);

    // toy model: each Elsässer component only rotates in phase at fixed y
    const ToyState toy = toy_from_state(s0);
    const cplx z0 = interpolate(toy.z1_plus, 3 * pi / 2);
    for (double t : {20.0, 200.0, 2000.0})
        CHECK(std::abs(interpolate(toy_evolve(toy, p, t).z1_plus, 3 * pi / 2)) == doctest::Approx(std::abs(z0)).epsilon(1e-10));
    std::vector<double> times;
    for (int i = 0; i <= 4000; ++i) times.push_back(0.5 * i);
    const std::vector<NormSeries> td = toy_depletion_trace(toy, p, times, std::vector<double>{3 * pi / 2});
    CHECK(windowed_max_ratio(td[0], 0.0, 500.0, 1500.0, 2000.0) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("energy functionals")
{
    const ShearProfile p = build_profile(ProfileSpec::constant(0.0), ProfileSpec::cosine(1.0, 0.2), PeriodicGrid(128));
    const SpectralState zero{1, ComplexField(p.grid), ComplexField(p.grid), 0.0};
    CHECK(energy_functional(zero, p, 0) == 0.0);
    const SpectralState s0 = make_initial(InitialSpec{}, elsasser(p), 1);
    const std::vector<SpectralState> traj = evolve(s0, p, 10.0, 1e-3, 10000);
    for (int k : {0, 1}) {
        const double e0 = energy_functional(traj.front(), p, k), e1 = energy_functional(traj.back(), p, k);
        CHECK(e0 > 0.0);
        CHECK(std::abs(e1 - e0) < 1e-9 * e0);
    }
    // b constant: the corrected term is just ‖Ĥ₁‖²
    const ShearProfile k = test::constant_profile(128);
    const PrimitiveFields pf = primitive_fields(s0);
    const double plain = std::pow(l2_norm(pf.u1), 2) + std::pow(l2_norm(pf.u2), 2) + std::pow(l2_norm(pf.h1), 2) +
                         std::pow(l2_norm(pf.h2), 2);
    CHECK(energy_functional(s0, k, 0) == doctest::Approx(plain).epsilon(1e-12));
    CHECK(test::error_of([&] { energy_functional(s0, p, -1); }) == ErrorKind::invalid_argument);
    CHECK(test::error_of([&] { energy_functional(s0, test::default_profile(64), 0); }) == ErrorKind::grid_mismatch);
}

TEST_CASE("growth fits")
{
    const NormSeries lin = series("lin", 0.0, 10.0, 20, [](double t) { return 3.0 * t; }, false);
    const GrowthFit fl = growth_fit(lin, GrowthModel::linear_envelope);
    CHECK(fl.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fl.residual < 1e-12);

    const NormSeries pw = series("pow", 1.0, 1000.0, 30, [](double t) { return 2.0 * std::pow(t, -0.5); });
    CHECK(growth_fit(pw, GrowthModel::power).value == doctest::Approx(-0.5).epsilon(1e-12));

    // an oscillating decay: the envelope recovers the exponent
    const NormSeries osc = series("osc", 1.0, 1000.0, 1000, [](double t) { return std::pow(t, -1.0) * (1.5 + std::cos(50.0 * t)); });
    CHECK(growth_fit(osc, GrowthModel::power_envelope).value == doctest::Approx(-1.0).epsilon(0.1));

    const NormSeries noisy = series("noisy", 1.0, 1000.0, 30, [](double t) { return std::exp(std::sin(3.0 * t)); });
    CHECK(test::error_of([&] { growth_fit(noisy, GrowthModel::power); }) == ErrorKind::fit_unstable);

    const NormSeries few = series("few", 1.0, 100.0, 5, [](double t) { return t; });
    CHECK(test::error_of([&] { growth_fit(few, GrowthModel::power); }) == ErrorKind::invalid_argument);
    const NormSeries narrow = series("narrow", 1.0, 5.0, 20, [](double t) { return t; });
    CHECK(test::error_of([&] { growth_fit(narrow, GrowthModel::power); }) == ErrorKind::invalid_argument);
    CHECK(parse_growth_model(growth_model_name(GrowthModel::power_envelope)) == GrowthModel::power_envelope);
    CHECK(test::error_of([] { parse_growth_model("cubic"); }) == ErrorKind::invalid_argument);
}

TEST_CASE("norm series validation")
{
    NormSeries s{"s", {}, {}, 0};
    s.push(0.0, 1.0);
    CHECK(test::error_of([&] { s.push(0.0, 1.0); }) == ErrorKind::invalid_argument);
    CHECK(test::error_of([&] { s.push(1.0, std::nan("")); }) == ErrorKind::invalid_argument);
    CHECK(s.size() == 1);
}

TEST_CASE("windowed ratio")
{
    const NormSeries s = series("w", 0.0, 100.0, 101, [](double t) { return 10.0 - 0.05 * t; }, false);
    CHECK(windowed_max_ratio(s, 0.0, 50.0, 50.0, 100.0) == doctest::Approx(7.5 / 10.0));
}

TEST_CASE("mixing equivalence for zero-mean data")
{
    const ShearProfile p = test::default_profile(128);
    for (unsigned seed : {1u, 2u, 3u}) {
        const SpectralState s0{1, zero_mean(test::random_field(p.grid, 6, seed)),
                               zero_mean(test::random_field(p.grid, 6, seed + 10)), 0.0};
        for (const SpectralState& st : evolve(s0, p, 50.0, 0.05, 100)) {
            const double r = mixing_equivalence_ratio(st);
            CHECK(r >= 1.0 / 3.0);
            CHECK(r <= 3.0);
        }
    }
}
