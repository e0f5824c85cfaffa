#include <benchmark/benchmark.h>

#include "mhdlab/evolution.hpp"
#include "mhdlab/local_sturmian.hpp"
#include "mhdlab/sturmian.hpp"

using namespace mhdlab;

namespace {

ShearProfile sheared(std::size_t n)
{
    return build_profile(ProfileSpec::sine(0.0, 0.1), ProfileSpec::constant(1.0), PeriodicGrid(n));
}

void spectral_derivative(benchmark::State& st)
{
    const PeriodicGrid g(std::size_t(st.range(0)));
    const ComplexField f = ComplexField::sample(g, [](double y) { return std::exp(cplx(0, 1) * std::sin(y)); });
    for (auto _ : st) benchmark::DoNotOptimize(derivative(f, 2));
}
BENCHMARK(spectral_derivative)->RangeMultiplier(4)->Range(64, 4096);

void generator(benchmark::State& st)
{
    const ShearProfile p = sheared(std::size_t(st.range(0)));
    const SpectralState s = make_initial(InitialSpec{}, elsasser(p), 1);
    for (auto _ : st) benchmark::DoNotOptimize(apply_generator(s, p));
}
BENCHMARK(generator)->RangeMultiplier(4)->Range(64, 4096);

void rk4_step(benchmark::State& st)
{
    const ShearProfile p = sheared(std::size_t(st.range(0)));
    const SpectralState s = make_initial(InitialSpec{}, elsasser(p), 1);
    for (auto _ : st) benchmark::DoNotOptimize(step_rk4(s, p, 0.05));
}
BENCHMARK(rk4_step)->RangeMultiplier(4)->Range(64, 4096);

void dense_resolvent(benchmark::State& st)
{
    const ShearProfile p = sheared(std::size_t(st.range(0)));
    const SturmianDirect op(elsasser(p), 1);
    const SpectralState s = make_initial(InitialSpec{}, elsasser(p), 1);
    const RhsParts parts = rhs_parts(s.psi_hat, s.phi_hat, p, 1);
    const cplx c(0.95, 0.01);
    for (auto _ : st) benchmark::DoNotOptimize(op.sample(c, parts.at(c)));
}
BENCHMARK(dense_resolvent)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void neumann_series(benchmark::State& st)
{
    const ElsasserPair pair = elsasser(sheared(256));
    CriticalPoint cp;
    for (const CriticalPoint& q : find_critical_points(pair).points)
        if (q.side == Side::plus && q.z_pp > 0.0) cp = q;
    const double c = cp.z_value + 0.02;
    const double yt = find_turning_point(pair, Side::plus, c, cp.y0, cp.y0 + 1.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(homogeneous_neumann(pair, Side::plus, 1, cplx(c, 0.0), cp.y0, cp.y0 + 1.0, yt));
}
BENCHMARK(neumann_series)->Unit(benchmark::kMillisecond);

void local_solve(benchmark::State& st)
{
    const ElsasserPair pair = elsasser(sheared(256));
    CriticalPoint cp;
    for (const CriticalPoint& q : find_critical_points(pair).points)
        if (q.side == Side::plus && q.z_pp > 0.0) cp = q;
    const LocalProblem lp = LocalProblem::from_c(pair, 1, cp, cplx(cp.z_value + 1e-3, 1e-5), {cp.y0 - 1.0, cp.y0 + 1.0});
    for (auto _ : st) benchmark::DoNotOptimize(local_explicit_solve(lp, [](double y) { return cplx(std::cos(y)); }));
}
BENCHMARK(local_solve)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
