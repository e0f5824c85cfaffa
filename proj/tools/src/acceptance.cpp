#include "mhdlab/app/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/dunford.hpp"
#include "mhdlab/errors.hpp"
#include "mhdlab/local_sturmian.hpp"
#include "mhdlab/sturmian.hpp"

namespace mhdlab::app {

namespace {

using clock = std::chrono::steady_clock;
constexpr double pi = std::numbers::pi;

double seconds_since(clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); }

double pair_norm(const ComplexField& a, const ComplexField& b) { return std::hypot(l2_norm(a), l2_norm(b)); }

double rel_error(const SpectralState& got, const SpectralState& want)
{
    return pair_norm(got.psi_hat - want.psi_hat, got.phi_hat - want.phi_hat) / pair_norm(want.psi_hat, want.phi_hat);
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fix(double v, int digits = 3)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

InitialSpec seeded(const RunConfig& cfg, int bandwidth, double decay)
{
    InitialSpec s;
    s.family = InitialFamily::band_limited_random;
    s.seed = cfg.initial.seed;
    s.bandwidth = bandwidth;
    s.decay_power = decay;
    return s;
}

std::vector<double> distinct_critical_y(const CriticalPointSet& cps)
{
    std::vector<double> ys;
    for (const CriticalPoint& cp : cps.points)
        if (std::none_of(ys.begin(), ys.end(), [&](double y) { return std::abs(y - cp.y0) < 1e-9; }))
            ys.push_back(cp.y0);
    return ys;
}

// Minimum of Z₊ (Z″ > 0), the point the local asymptotics are stated at.
CriticalPoint plus_minimum(const ElsasserPair& pair)
{
    for (const CriticalPoint& cp : find_critical_points(pair).points)
        if (cp.side == Side::plus && cp.z_pp > 0.0) return cp;
    fail(ErrorKind::invalid_argument, "profile has no minimum of Z+");
}

// ---- 1 -------------------------------------------------------------------------------------------

CriterionResult constant_oracle(const RunConfig& cfg)
{
    CriterionResult r{1, "constant-coefficient oracle", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof = build_profile(ProfileSpec::constant(0.0), ProfileSpec::constant(1.0), PeriodicGrid(128));
    const ElsasserPair pair = elsasser(prof);
    const int alpha = 1;
    const double T = 10.0, dt = 1e-3;
    const SpectralState s0 = make_initial(seeded(cfg, 4, 2.0), pair, alpha);
    const std::vector<SpectralState> traj = evolve(s0, prof, T, dt, 1 << 30);
    // u = 0, b = 1: ∂ψ = iαφ, ∂φ = iαψ.
    const double c = std::cos(alpha * T), s = std::sin(alpha * T);
    const cplx is(0.0, s);
    SpectralState want{alpha, c * s0.psi_hat + is * s0.phi_hat, is * s0.psi_hat + c * s0.phi_hat, T};
    const double err = rel_error(traj.back(), want);
    r.seconds = seconds_since(t0);
    r.pass = err < 1e-8 && r.seconds < 5.0;
    r.measured = {{"rel_l2_error", err}, {"T", T}, {"dt", dt}, {"n", 128}};
    r.summary = "rel L2 error " + sci(err) + " (< 1e-8), runtime < 5 s";
    return r;
}

// ---- 2 -------------------------------------------------------------------------------------------

CriterionResult energy_conservation(const RunConfig& cfg)
{
    CriterionResult r{2, "energy conservation", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const int alpha = 1;
    const double T = 100.0, dt = 1e-3;
    double worst = 0.0;
    json runs = json::array();
    for (double u0 : {0.0, 0.3}) {
        const ShearProfile prof =
            build_profile(ProfileSpec::constant(u0), ProfileSpec::cosine(1.0, 0.2), PeriodicGrid(256));
        const ElsasserPair pair = elsasser(prof);
        const SpectralState s0 = make_initial(seeded(cfg, 1, 4.0), pair, alpha);
        const std::vector<SpectralState> traj = evolve(s0, prof, T, dt, 1000);
        for (int k : {0, 1}) {
            const double e0 = energy_functional(traj.front(), prof, k);
            double drift = 0.0;
            for (const SpectralState& s : traj) drift = std::max(drift, std::abs(energy_functional(s, prof, k) - e0) / e0);
            worst = std::max(worst, drift);
            runs.push_back({{"u", u0}, {"k", k}, {"max_rel_drift", drift}});
        }
    }
    r.seconds = seconds_since(t0);
    r.pass = worst < 1e-8 && r.seconds < 120.0;
    r.measured = {{"runs", runs}, {"worst", worst}};
    r.summary = "max rel drift of E_0, E_1 (u = 0 and u = 0.3) " + sci(worst) + " (< 1e-8)";
    return r;
}

// ---- 3 -------------------------------------------------------------------------------------------

CriterionResult vorticity_growth(const RunConfig& cfg)
{
    CriterionResult r{3, "vorticity/current growth", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof =
        build_profile(ProfileSpec::constant(0.0), ProfileSpec::cosine(1.0, 0.2), PeriodicGrid(256));
    const ElsasserPair pair = elsasser(prof);
    const SpectralState s0 = make_initial(seeded(cfg, 1, 4.0), pair, 1);
    const std::vector<SpectralState> traj = evolve(s0, prof, 200.0, 0.01, 10);
    const NormSeries all = vorticity_norms(traj);
    NormSeries window{all.label, {}, {}, 0};
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all.times[i] >= 10.0 - 1e-9) window.push(all.times[i], all.values[i]);
    const GrowthFit fit = growth_fit(window, GrowthModel::power_envelope);
    r.seconds = seconds_since(t0);
    r.pass = fit.value <= 1.1;
    r.measured = {{"exponent", fit.value}, {"residual", fit.residual}, {"t_range", {10.0, 200.0}}};
    r.summary = "envelope power exponent " + fix(fit.value) + " (<= 1.1), fit residual " + sci(fit.residual);
    return r;
}

// ---- 4 -------------------------------------------------------------------------------------------

CriterionResult toy_rates(const RunConfig& cfg)
{
    CriterionResult r{4, "toy-model mixing rates", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof = build_profile(cfg.u, cfg.b, PeriodicGrid(4096));
    const ElsasserPair pair = elsasser(prof);
    std::vector<double> times;
    const int m = cfg.scan.toy_samples;
    for (int i = 0; i < m; ++i)
        times.push_back(cfg.scan.toy_t_min *
                        std::pow(cfg.scan.toy_t_max / cfg.scan.toy_t_min, double(i) / double(m - 1)));
    auto exponent = [&](bool vanish) {
        InitialSpec spec = seeded(cfg, 1, 4.0);
        spec.vanish_at_critical = vanish;
        const ToyState z0 = toy_from_state(make_initial(spec, pair, cfg.alpha));
        // Stationary points of Z₊ and Z₋ share y, so the norm beats; fit its envelope.
        return growth_fit(toy_mixing_series(z0, prof, times), GrowthModel::power_envelope);
    };
    const GrowthFit generic = exponent(false), vanishing = exponent(true);
    r.seconds = seconds_since(t0);
    r.pass = std::abs(generic.value + 0.5) <= 0.1 && vanishing.value <= -0.85 && r.seconds < 30.0;
    r.measured = {{"generic_exponent", generic.value},   {"generic_residual", generic.residual},
                  {"vanishing_exponent", vanishing.value}, {"vanishing_residual", vanishing.residual},
                  {"t_range", {cfg.scan.toy_t_min, cfg.scan.toy_t_max}}, {"n", 4096}};
    r.summary = "exponent generic " + fix(generic.value) + " (-0.5 +- 0.1), vanishing " + fix(vanishing.value) +
                " (<= -0.85)";
    return r;
}

// ---- 5 and 6 share one trajectory ----------------------------------------------------------------

struct DampingRun {
    ShearProfile profile;
    std::vector<SpectralState> traj;
    double seconds = 0.0;
};

DampingRun damping_run(const RunConfig& cfg)
{
    const auto t0 = clock::now();
    DampingRun run{make_profile(cfg), {}, 0.0};
    const ElsasserPair pair = elsasser(run.profile);
    // Criterion setup: T = 200 sampled every step of 0.05.
    const SpectralState s0 = make_initial(cfg.initial, pair, cfg.alpha);
    run.traj = evolve(s0, run.profile, 200.0, 0.05, 1);
    run.seconds = seconds_since(t0);
    return run;
}

CriterionResult vertical_damping(const RunConfig& cfg, const DampingRun& run)
{
    CriterionResult r{5, "vertical damping", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const NormSeries v = vertical_norms(run.traj);
    const double ratio = windowed_max_ratio(v, 0.0, 50.0, 150.0, 200.0);
    const SpacetimeSeries acc = spacetime_accumulator(run.traj, run.profile);
    const double early = acc.increment(0.0, 100.0), late = acc.increment(100.0, 200.0);
    r.seconds = run.seconds + seconds_since(t0);
    r.pass = ratio < cfg.thresholds.vertical_ratio && late < cfg.thresholds.spacetime_ratio * early &&
             r.seconds < 600.0;
    r.measured = {{"windowed_max_ratio", ratio},
                  {"accumulator_increment_0_100", early},
                  {"accumulator_increment_100_200", late},
                  {"increment_ratio", late / early},
                  {"accumulator_over_h3", acc.ratio()}};
    r.summary = "windowed max ratio " + fix(ratio) + " (< " + fix(cfg.thresholds.vertical_ratio, 2) +
                "), accumulator increment ratio " + fix(late / early) + " (< " +
                fix(cfg.thresholds.spacetime_ratio, 2) + ")";
    return r;
}

CriterionResult horizontal_depletion(const RunConfig& cfg, const DampingRun& run)
{
    CriterionResult r{6, "horizontal depletion", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ElsasserPair pair = elsasser(run.profile);
    const std::vector<double> ys = distinct_critical_y(find_critical_points(pair));
    require(!ys.empty(), ErrorKind::invalid_argument, "profile has no critical points");
    std::vector<double> probe = ys;
    probe.push_back(ys.front() + cfg.scan.control_offset);
    const std::vector<NormSeries> full = depletion_trace(run.traj, probe);
    const ToyState z0 = toy_from_state(run.traj.front());
    const std::vector<NormSeries> toy = toy_depletion_trace(z0, run.profile, run.traj.size() ? [&] {
        std::vector<double> t;
        for (const SpectralState& s : run.traj) t.push_back(s.t);
        return t;
    }() : std::vector<double>{}, ys);
    bool ok = true;
    double worst_full = 0.0, worst_toy = 1e300;
    json points = json::array();
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double rf = windowed_max_ratio(full[i], 0.0, 50.0, 150.0, 200.0);
        const double rt = windowed_max_ratio(toy[i], 0.0, 50.0, 150.0, 200.0);
        ok = ok && rf < cfg.thresholds.depletion_ratio && rt >= cfg.thresholds.toy_ratio;
        worst_full = std::max(worst_full, rf);
        worst_toy = std::min(worst_toy, rt);
        points.push_back({{"y0", ys[i]}, {"full_ratio", rf}, {"toy_ratio", rt}});
    }
    const double control = windowed_max_ratio(full.back(), 0.0, 50.0, 150.0, 200.0);
    r.seconds = seconds_since(t0);
    r.pass = ok;
    r.measured = {{"points", points}, {"control_y", probe.back()}, {"control_ratio", control}};
    r.summary = "max full ratio " + fix(worst_full) + " (< " + fix(cfg.thresholds.depletion_ratio, 2) +
                "), min toy ratio " + fix(worst_toy, 4) + " (>= " + fix(cfg.thresholds.toy_ratio, 2) +
                "), control " + fix(control);
    return r;
}

// ---- 7 -------------------------------------------------------------------------------------------

CriterionResult blowup_exponents(const RunConfig& cfg, int jobs)
{
    CriterionResult r{7, "resolvent blow-up exponents", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof = make_profile(cfg);
    const CriticalPoint cp = plus_minimum(elsasser(prof));
    // The data, hence F, is the same band-limited function on every grid.
    std::map<std::size_t, RhsParts> parts;
    for (int n : cfg.scan.grid_sizes) {
        if (parts.count(std::size_t(n))) continue;
        const ShearProfile pn = make_profile(cfg, std::size_t(n));
        const SpectralState s0 = make_initial(cfg.initial, elsasser(pn), cfg.alpha);
        parts.emplace(std::size_t(n), rhs_parts(s0.psi_hat, s0.phi_hat, pn, cfg.alpha));
    }
    const RhsFamily f = [&parts](const PeriodicGrid& g, cplx c) { return parts.at(g.size()).at(c); };
    std::vector<std::size_t> sizes(cfg.scan.grid_sizes.begin(), cfg.scan.grid_sizes.end());
    const DepletionResult d = depletion_exponents(prof, cfg.alpha, cp, f, cfg.scan.eps_list, sizes,
                                                  cp.y0 + cfg.scan.control_offset, jobs, false);
    r.seconds = seconds_since(t0);
    const bool stable = d.residual_phi <= 0.1 && d.residual_dphi <= 0.1;
    r.pass = stable && d.p_phi >= -0.30 && d.p_phi <= 0.0 && d.p_dphi >= -0.80 && d.p_dphi <= -0.40 &&
             r.seconds < 300.0;
    json rows = json::array();
    for (const DepletionRow& row : d.rows)
        rows.push_back({{"eps", row.eps},
                        {"n", row.n},
                        {"scale", row.scale},
                        {"abs_phi", row.abs_phi},
                        {"abs_dphi", row.abs_dphi},
                        {"abs_phi_control", row.abs_phi_control},
                        {"condition", row.condition}});
    r.measured = {{"p_phi", d.p_phi},           {"p_dphi", d.p_dphi}, {"residual_phi", d.residual_phi},
                  {"residual_dphi", d.residual_dphi}, {"y0", cp.y0},   {"rows", rows}};
    r.summary = "slope |Phi(y0)| " + fix(d.p_phi) + " in [-0.30, 0], slope |dPhi(y0)| " + fix(d.p_dphi) +
                " in [-0.80, -0.40], fit residuals " + fix(d.residual_phi) + ", " + fix(d.residual_dphi) + " (<= 0.1)";
    return r;
}

// ---- 8 -------------------------------------------------------------------------------------------

CriterionResult local_asymptotics(const RunConfig& cfg)
{
    CriterionResult r{8, "I^k and sigma*D asymptotics", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof = make_profile(cfg);
    const ElsasserPair pair = elsasser(prof);
    const CriticalPoint cp = plus_minimum(pair);
    const cplx sigma = std::polar(1e-3, pi / 16.0);
    const LocalProblem lp = LocalProblem::from_sigma(pair, cfg.alpha, cp, sigma, {cp.y0 - 1.0, cp.y0 + 1.0});
    const LocalSolution sol = local_explicit_solve(lp, [](double y) { return cplx(std::cos(y), 0.0); });
    const SturmianLocal& loc = sol.local;
    // −iπ/(b(y₀)√(2Z″₊(y₀))); for the default profile this is −iπ/√0.2.
    const cplx target(0.0, -pi / (prof.b_at(cp.y0).v * std::sqrt(2.0 * cp.z_pp)));
    const double scale = std::abs(target);
    const double er = std::abs(2.0 * sigma * loc.I_r - target) / scale;
    const double el = std::abs(2.0 * sigma * loc.I_l - target) / scale;
    const double ed = std::abs(sigma * loc.det_D + target) / scale;
    const double id = std::max(loc.identity_residual_r, loc.identity_residual_l);
    r.seconds = seconds_since(t0);
    r.pass = er < 0.05 && el < 0.05 && ed < 0.05 && id < 1e-6 && r.seconds < 60.0;
    r.measured = {{"sigma", {sigma.real(), sigma.imag()}},
                  {"rel_err_2sigmaI_r", er},
                  {"rel_err_2sigmaI_l", el},
                  {"rel_err_sigmaD", ed},
                  {"identity_residual", id},
                  {"sigmaD", {(sigma * loc.det_D).real(), (sigma * loc.det_D).imag()}}};
    r.summary = "|2sI+ipi/sqrt0.2| rel " + sci(std::max(er, el)) + " (< 0.05), sigmaD rel " + sci(ed) +
                " (< 0.05), identity residual " + sci(id) + " (< 1e-6)";
    return r;
}

// ---- 9 -------------------------------------------------------------------------------------------

CriterionResult dunford_agreement(const RunConfig& cfg, int jobs)
{
    CriterionResult r{9, "Dunford agreement", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof = make_profile(cfg);
    const ElsasserPair pair = elsasser(prof);
    const SpectralState s0 = make_initial(cfg.initial, pair, cfg.alpha);
    const ContourSpec contour = build_contour(pair, cfg.scan.contour_eps, cfg.scan.contour_nodes);

    const SpectralState c0 = reconstruct_contour(s0.psi_hat, s0.phi_hat, prof, cfg.alpha, 0.0, contour, jobs);
    const SpectralState c2 = reconstruct_contour(s0.psi_hat, s0.phi_hat, prof, cfg.alpha, 2.0, contour, jobs);
    const SpectralState c5 = reconstruct_contour(s0.psi_hat, s0.phi_hat, prof, cfg.alpha, 5.0, contour, jobs);
    const std::vector<SpectralState> traj = evolve(s0, prof, 5.0, 5e-3, 1 << 30);
    const JumpDensity density = build_jump_density(s0.psi_hat, s0.phi_hat, prof, cfg.alpha, cfg.scan.jump, jobs);
    const SpectralState j2 = reconstruct_jump(density, prof, 2.0);

    const double e0 = rel_error(c0, s0), e5 = rel_error(c5, traj.back()), ej = rel_error(j2, c2);
    r.seconds = seconds_since(t0);
    r.pass = e5 < 1e-4 && ej < 1e-3 && e0 < 1e-6 && r.seconds < 600.0;
    r.measured = {{"t0_reproduction", e0},
                  {"contour_vs_evolve_t5", e5},
                  {"jump_vs_contour_t2", ej},
                  {"contour_nodes", contour.nodes.size()},
                  {"jump_samples", density.c_samples.size()}};
    r.summary = "t=0 " + sci(e0) + " (< 1e-6), contour vs evolve t=5 " + sci(e5) + " (< 1e-4), jump vs contour t=2 " +
                sci(ej) + " (< 1e-3)";
    return r;
}

// ---- 10 ------------------------------------------------------------------------------------------

CriterionResult homogeneous_construction(const RunConfig& cfg)
{
    CriterionResult r{10, "homogeneous Sturmian construction", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof = make_profile(cfg);
    const ElsasserPair pair = elsasser(prof);
    const CriticalPoint cp = plus_minimum(pair);
    const double c = cp.z_value + 0.02;
    bool ok = true;
    double worst_res = 0.0, worst_c = 0.0;
    int max_terms = 0;
    json sides = json::array();
    for (int dir : {+1, -1}) {
        const double lo = dir > 0 ? cp.y0 : cp.y0 - 1.0, hi = dir > 0 ? cp.y0 + 1.0 : cp.y0;
        const double yt = find_turning_point(pair, Side::plus, c, lo, hi);
        require(std::isfinite(yt), ErrorKind::window_invalid, "no turning point in the default window");
        const HomogeneousSolution hs = homogeneous_neumann(pair, Side::plus, cfg.alpha, cplx(c, 0.0), lo, hi, yt);
        const SturmianFrame frame(pair, Side::plus, hs.origin, pair.z_at(Side::plus, hs.origin).v - c);
        const double res = hs.ode_residual(frame, cfg.alpha);
        const auto nodes = hs.grid.nodes();
        const double st = hs.turning_point;
        bool at_least_one = true, monotone = true, real = true;
        double cmax = 0.0;
        // φ must grow with distance from the turning point on both sides of it.
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double phi = hs.varphi[i].real();
            real = real && std::abs(hs.varphi[i].imag()) <= 1e-12 * std::abs(phi);
            at_least_one = at_least_one && phi >= 1.0 - 1e-14;
            if (i + 1 < nodes.size()) {
                const double next = hs.varphi[i + 1].real();
                if (nodes[i] >= st) monotone = monotone && next >= phi - 1e-14;
                if (nodes[i + 1] <= st) monotone = monotone && next <= phi + 1e-14;
            }
            const double d = nodes[i] - st;
            if (std::abs(d) > 1e-12) cmax = std::max(cmax, std::abs(hs.varphi[i] - 1.0) / (d * d));
        }
        ok = ok && res < 1e-8 && at_least_one && monotone && real && std::isfinite(cmax) && hs.neumann_terms <= 30;
        worst_res = std::max(worst_res, res);
        worst_c = std::max(worst_c, cmax);
        max_terms = std::max(max_terms, hs.neumann_terms);
        sides.push_back({{"interval", {lo, hi}},
                         {"turning_point", yt},
                         {"ode_residual", res},
                         {"phi_ge_1", at_least_one},
                         {"monotone", monotone},
                         {"C_quadratic", cmax},
                         {"neumann_terms", hs.neumann_terms}});
    }
    r.seconds = seconds_since(t0);
    r.pass = ok;
    r.measured = {{"c", c}, {"sides", sides}};
    r.summary = "ODE residual " + sci(worst_res) + " (< 1e-8), C = " + fix(worst_c) + ", Neumann terms " +
                std::to_string(max_terms) + " (<= 30), phi >= 1 and monotone: " + (ok ? "yes" : "see report");
    return r;
}

// ---- 11 ------------------------------------------------------------------------------------------

CriterionResult flux_identities(const RunConfig& cfg)
{
    CriterionResult r{11, "resolvent flux identities", false, {}, {}, 0.0};
    const auto t0 = clock::now();
    const ShearProfile prof = make_profile(cfg);
    const PeriodicGrid& g = prof.grid;
    std::mt19937_64 rng(cfg.initial.seed + 11);
    std::uniform_real_distribution<double> re(-1.3, 1.3), im(0.05, 0.3), coin(0.0, 1.0);
    std::normal_distribution<double> normal;
    double worst1 = 0.0, worst2 = 0.0;
    for (int s = 0; s < 20; ++s) {
        const cplx c(re(rng), (coin(rng) < 0.5 ? -1.0 : 1.0) * im(rng));
        std::vector<cplx> coeffs(g.size());
        for (int k = -8; k <= 8; ++k) {
            const double w = std::pow(1.0 + double(k) * k, -1.0);
            const double a = normal(rng), b = normal(rng);
            coeffs[std::size_t((k + long(g.size())) % long(g.size()))] = w * cplx(a, b);
        }
        const ComplexField f(g, from_fourier(coeffs));
        const FluxResiduals fr = flux_residuals(solve_resolvent_direct(f, prof, cfg.alpha, c), prof);
        worst1 = std::max(worst1, fr.eq1);
        worst2 = std::max(worst2, fr.eq2);
    }
    r.seconds = seconds_since(t0);
    r.pass = worst1 < 1e-8 && worst2 < 1e-8;
    r.measured = {{"samples", 20}, {"max_eq1", worst1}, {"max_eq2", worst2}};
    r.summary = "max residual eq1 " + sci(worst1) + ", eq2 " + sci(worst2) + " (< 1e-8)";
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const AcceptanceOptions& opts)
{
    std::vector<CriterionResult> out;
    auto wanted = [&](int id) { return opts.only.empty() || opts.only.count(id) > 0; };
    auto record = [&](int id, const std::string& title, auto&& body) {
        if (!wanted(id)) return;
        const auto t0 = clock::now();
        CriterionResult res;
        try {
            res = body();
        } catch (const Error& e) {
            res = {id, title, false, std::string(error_name(e.kind())) + ": " + e.what(),
                   {{"error", error_name(e.kind())}, {"message", e.what()}}, seconds_since(t0)};
        } catch (const std::exception& e) {
            res = {id, title, false, std::string("exception: ") + e.what(), {{"message", e.what()}}, seconds_since(t0)};
        }
        if (opts.on_result) opts.on_result(res);
        out.push_back(std::move(res));
    };

    record(1, "constant-coefficient oracle", [&] { return constant_oracle(cfg); });
    record(2, "energy conservation", [&] { return energy_conservation(cfg); });
    record(3, "vorticity/current growth", [&] { return vorticity_growth(cfg); });
    record(4, "toy-model mixing rates", [&] { return toy_rates(cfg); });
    if (wanted(5) || wanted(6)) {
        std::optional<DampingRun> run;
        std::string run_error;
        json run_json;
        try {
            run = damping_run(cfg);
        } catch (const Error& e) {
            run_error = std::string(error_name(e.kind())) + ": " + e.what();
            run_json = {{"error", error_name(e.kind())}, {"message", e.what()}};
        }
        auto guarded = [&](auto&& f) {
            if (!run) fail(ErrorKind::invalid_argument, "trajectory failed: " + run_error);
            return f(*run);
        };
        record(5, "vertical damping", [&] { return guarded([&](const DampingRun& d) { return vertical_damping(cfg, d); }); });
        record(6, "horizontal depletion",
               [&] { return guarded([&](const DampingRun& d) { return horizontal_depletion(cfg, d); }); });
    }
    record(7, "resolvent blow-up exponents", [&] { return blowup_exponents(cfg, opts.jobs); });
    record(8, "I^k and sigma*D asymptotics", [&] { return local_asymptotics(cfg); });
    record(9, "Dunford agreement", [&] { return dunford_agreement(cfg, opts.jobs); });
    record(10, "homogeneous Sturmian construction", [&] { return homogeneous_construction(cfg); });
    record(11, "resolvent flux identities", [&] { return flux_identities(cfg); });
    return out;
}

std::string format_line(const CriterionResult& r)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
    return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " + r.summary + buf;
}

json to_json(const CriterionResult& r)
{
    return {{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"summary", r.summary},
            {"seconds", r.seconds}, {"measured", r.measured}};
}

}  // namespace mhdlab::app
