#include "mhdlab/app/runners.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "mhdlab/app/acceptance.hpp"
#include "mhdlab/app/output.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/dunford.hpp"
#include "mhdlab/errors.hpp"
#include "mhdlab/sturmian.hpp"

namespace mhdlab::app {

namespace {

struct Context {
    const RunConfig& cfg;
    const RunOptions& opts;
    std::string hash;

    void log(const std::string& msg) const
    {
        if (opts.verbose) std::cerr << "mhdlab: " << msg << '\n';
    }
    json report(std::string_view command) const
    {
        return {{"command", command}, {"config_hash", hash}, {"config", cfg.canonical()}};
    }
    std::filesystem::path file(const char* name) const { return opts.out / name; }
};

double pair_norm(const ComplexField& a, const ComplexField& b) { return std::hypot(l2_norm(a), l2_norm(b)); }

double rel_error(const SpectralState& got, const SpectralState& want)
{
    return pair_norm(got.psi_hat - want.psi_hat, got.phi_hat - want.phi_hat) / pair_norm(want.psi_hat, want.phi_hat);
}

// Fits are reported, not fatal: a FitUnstable series still gets its CSV.
json fit_json(const NormSeries& s, GrowthModel model)
{
    try {
        const GrowthFit f = growth_fit(s, model);
        return {{"model", growth_model_name(model)}, {"value", f.value}, {"residual", f.residual}};
    } catch (const Error& e) {
        return {{"model", growth_model_name(model)}, {"error", error_name(e.kind())}, {"message", e.what()}};
    }
}

NormSeries tagged(NormSeries s, const Context& ctx)
{
    s.config_hash = ctx.cfg.hash();
    return s;
}

std::vector<double> critical_ys(const ElsasserPair& pair)
{
    std::vector<double> ys;
    for (const CriticalPoint& cp : find_critical_points(pair).points)
        if (ys.empty() || std::abs(ys.back() - cp.y0) > 1e-9) ys.push_back(cp.y0);
    return ys;
}

std::string point_label(const char* prefix, double y)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s(y=%.6f)", prefix, y);
    return buf;
}

SpectralState initial_state(const RunConfig& cfg, const ShearProfile& prof)
{
    return make_initial(cfg.initial, elsasser(prof), cfg.alpha);
}

// ---- evolve ----

int run_evolve(const Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const ShearProfile prof = make_profile(cfg);
    const SpectralState s0 = initial_state(cfg, prof);
    ctx.log("evolving to T=" + fmt(cfg.time.T));
    const std::vector<SpectralState> traj = evolve(s0, prof, cfg.time.T, cfg.time.dt, cfg.time.sample_every);
    std::vector<NormSeries> series;
    series.push_back(tagged(vertical_norms(traj), ctx));
    series.push_back(tagged(vorticity_norms(traj), ctx));
    for (int k : {0, 1}) {
        NormSeries e{"energy_E" + std::to_string(k), {}, {}, cfg.hash()};
        for (const SpectralState& s : traj) e.push(s.t, energy_functional(s, prof, k));
        series.push_back(std::move(e));
    }
    write_snapshots_csv(ctx.file("snapshots.csv"), traj, ctx.hash);
    write_series_csv(ctx.file("series.csv"), series, ctx.hash);
    json r = ctx.report("evolve");
    const double e0 = series[2].values.front();
    double drift = 0.0;
    for (double e : series[2].values) drift = std::max(drift, std::abs(e - e0) / e0);
    r["snapshots"] = traj.size();
    r["final_time"] = traj.back().t;
    r["dt_max"] = dt_max(prof, cfg.alpha);
    r["energy_E0_max_rel_drift"] = drift;
    write_json(ctx.file("report.json"), r);
    return 0;
}

// ---- toy ----

int run_toy(const Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const ShearProfile prof = make_profile(cfg);
    const SpectralState s0 = initial_state(cfg, prof);
    const ToyState z0 = toy_from_state(s0);
    const ScanSpec& sc = cfg.scan;
    std::vector<double> log_times;
    for (int i = 0; i < sc.toy_samples; ++i)
        log_times.push_back(sc.toy_t_min * std::pow(sc.toy_t_max / sc.toy_t_min, double(i) / double(sc.toy_samples - 1)));
    std::vector<double> times;
    const double step = cfg.time.dt * cfg.time.sample_every;
    for (long i = 0;; ++i) {
        const double t = double(i) * step;
        if (t > cfg.time.T * (1.0 + 1e-12)) break;
        times.push_back(t);
    }
    std::vector<NormSeries> series;
    series.push_back(tagged(toy_mixing_series(z0, prof, log_times), ctx));
    series.back().label = "toy_mixing_hm1";
    const std::vector<double> ys = critical_ys(elsasser(prof));
    std::vector<NormSeries> traces = toy_depletion_trace(z0, prof, times, ys);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        traces[i].label = point_label("toy_depletion", ys[i]);
        series.push_back(tagged(std::move(traces[i]), ctx));
    }
    std::vector<SpectralState> snaps;
    for (double t : times) {
        const FieldPair h = toy_horizontal(toy_evolve(z0, prof, t));
        snaps.push_back({cfg.alpha, h.first, h.second, t});
    }
    write_snapshots_csv(ctx.file("snapshots.csv"), snaps, ctx.hash);
    write_series_csv(ctx.file("series.csv"), series, ctx.hash);
    json r = ctx.report("toy");
    r["snapshot_columns"] = "psi = U1_hat, phi = H1_hat";
    r["mixing_fit"] = fit_json(series.front(), GrowthModel::power_envelope);
    r["critical_points"] = ys;
    write_json(ctx.file("report.json"), r);
    return 0;
}

// ---- resolvent-scan ----

int run_resolvent_scan(const Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const ShearProfile prof = make_profile(cfg);
    const SpectralState s0 = initial_state(cfg, prof);
    const RhsParts parts = rhs_parts(s0.psi_hat, s0.phi_hat, prof, cfg.alpha);
    const RhsFamily f = [&parts](const PeriodicGrid&, cplx c) { return parts.at(c); };
    const ScanSpec& sc = cfg.scan;
    std::vector<cplx> cs;
    for (double im : sc.im_values)
        for (int i = 0; i < sc.re_count; ++i) {
            const double re = sc.re_count == 1 ? sc.re_min
                                               : sc.re_min + (sc.re_max - sc.re_min) * double(i) / double(sc.re_count - 1);
            cs.emplace_back(re, im);
        }
    ctx.log("resolvent scan over " + std::to_string(cs.size()) + " points");
    const ScanTable table = resolvent_uniform_scan(f, prof, cfg.alpha, cs, ctx.opts.jobs);
    std::ostringstream csv;
    csv << "# config_hash=" << ctx.hash << "\n" << "re_c,im_c,phi_l2,q_h1,f_h1,ratio,condition\n";
    for (const ScanRow& row : table.rows)
        csv << fmt(row.c.real()) << ',' << fmt(row.c.imag()) << ',' << fmt(row.phi_l2) << ',' << fmt(row.q_h1) << ','
            << fmt(row.f_h1) << ',' << fmt(row.ratio) << ',' << fmt(row.condition) << '\n';
    write_text(ctx.file("scan.csv"), csv.str());
    json r = ctx.report("resolvent-scan");
    r["points"] = table.rows.size();
    r["max_ratio"] = table.max_ratio;
    r["strip_half_width"] = strip_half_width(prof);
    write_json(ctx.file("report.json"), r);
    return 0;
}

// ---- depletion-scan ----

int run_depletion_scan(const Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const ShearProfile prof = make_profile(cfg);
    const ElsasserPair pair = elsasser(prof);
    const CriticalPointSet cps = find_critical_points(pair);
    std::map<std::size_t, RhsParts> parts;
    for (int n : cfg.scan.grid_sizes) {
        if (parts.count(std::size_t(n))) continue;
        const ShearProfile pn = make_profile(cfg, std::size_t(n));
        const SpectralState s0 = initial_state(cfg, pn);
        parts.emplace(std::size_t(n), rhs_parts(s0.psi_hat, s0.phi_hat, pn, cfg.alpha));
    }
    const RhsFamily f = [&parts](const PeriodicGrid& g, cplx c) { return parts.at(g.size()).at(c); };
    const std::vector<std::size_t> sizes(cfg.scan.grid_sizes.begin(), cfg.scan.grid_sizes.end());
    std::ostringstream csv;
    csv << "# config_hash=" << ctx.hash << "\n"
        << "y0,side,eps,n,scale,abs_phi,abs_dphi,abs_phi_control,condition\n";
    json points = json::array();
    for (const CriticalPoint& cp : cps.points) {
        ctx.log("depletion scan at y0=" + fmt(cp.y0) + " (" + std::string(side_name(cp.side)) + ")");
        const DepletionResult d = depletion_exponents(prof, cfg.alpha, cp, f, cfg.scan.eps_list, sizes,
                                                      cp.y0 + cfg.scan.control_offset, ctx.opts.jobs);
        for (const DepletionRow& row : d.rows)
            csv << fmt(cp.y0) << ',' << side_name(cp.side) << ',' << fmt(row.eps) << ',' << row.n << ','
                << fmt(row.scale) << ',' << fmt(row.abs_phi) << ',' << fmt(row.abs_dphi) << ','
                << fmt(row.abs_phi_control) << ',' << fmt(row.condition) << '\n';
        points.push_back({{"y0", cp.y0},
                          {"side", side_name(cp.side)},
                          {"z_pp", cp.z_pp},
                          {"p_phi", d.p_phi},
                          {"p_dphi", d.p_dphi},
                          {"residual_phi", d.residual_phi},
                          {"residual_dphi", d.residual_dphi}});
    }
    write_text(ctx.file("scan.csv"), csv.str());
    json r = ctx.report("depletion-scan");
    r["critical_points"] = points;
    write_json(ctx.file("report.json"), r);
    return 0;
}

// ---- dunford ----

int run_dunford(const Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const ShearProfile prof = make_profile(cfg);
    const ElsasserPair pair = elsasser(prof);
    const SpectralState s0 = initial_state(cfg, prof);
    const ContourSpec contour = build_contour(pair, cfg.scan.contour_eps, cfg.scan.contour_nodes);
    ctx.log("building jump density");
    const JumpDensity density = build_jump_density(s0.psi_hat, s0.phi_hat, prof, cfg.alpha, cfg.scan.jump, ctx.opts.jobs);
    std::vector<SpectralState> snaps;
    json rows = json::array();
    double t_prev = 0.0;
    SpectralState stepped = s0;
    for (double t : cfg.scan.dunford_times) {
        ctx.log("reconstructing at t=" + fmt(t));
        const SpectralState c = reconstruct_contour(s0.psi_hat, s0.phi_hat, prof, cfg.alpha, t, contour, ctx.opts.jobs);
        const SpectralState j = reconstruct_jump(density, prof, t);
        if (t > t_prev) {
            stepped = evolve(stepped, prof, t - t_prev, std::min(cfg.time.dt, (t - t_prev) / 10.0), 1 << 30).back();
            t_prev = t;
        }
        stepped.t = t;
        rows.push_back({{"t", t},
                        {"contour_vs_evolve", rel_error(c, stepped)},
                        {"jump_vs_contour", rel_error(j, c)},
                        {"jump_vs_evolve", rel_error(j, stepped)}});
        snaps.push_back(c);
    }
    write_snapshots_csv(ctx.file("snapshots.csv"), snaps, ctx.hash);
    json r = ctx.report("dunford");
    r["contour_epsilon"] = contour.epsilon;
    r["contour_nodes"] = contour.nodes.size();
    r["jump_samples"] = density.c_samples.size();
    r["jump_eps"] = density.eps;
    r["times"] = rows;
    write_json(ctx.file("report.json"), r);
    return 0;
}

// ---- diagnose ----

int run_diagnose(const Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const ShearProfile prof = make_profile(cfg);
    const SpectralState s0 = initial_state(cfg, prof);
    ctx.log("evolving to T=" + fmt(cfg.time.T));
    const std::vector<SpectralState> traj = evolve(s0, prof, cfg.time.T, cfg.time.dt, cfg.time.sample_every);
    const double T = traj.back().t;
    // Early and late quarters of the run.
    const double q = T / 4.0;
    std::vector<NormSeries> series;
    series.push_back(tagged(vertical_norms(traj), ctx));
    series.push_back(tagged(vorticity_norms(traj), ctx));
    const SpacetimeSeries acc = spacetime_accumulator(traj, prof);
    series.push_back(tagged(acc.running, ctx));
    const std::vector<double> ys = critical_ys(elsasser(prof));
    std::vector<double> probe = ys;
    if (!ys.empty()) probe.push_back(ys.front() + cfg.scan.control_offset);
    std::vector<NormSeries> traces = depletion_trace(traj, probe);
    std::vector<double> times;
    for (const SpectralState& s : traj) times.push_back(s.t);
    std::vector<NormSeries> toy = toy_depletion_trace(toy_from_state(s0), prof, times, ys);

    json r = ctx.report("diagnose");
    r["final_time"] = T;
    r["vertical_windowed_ratio"] = windowed_max_ratio(series[0], 0.0, q, 3.0 * q, T);
    r["vertical_fit"] = fit_json(series[0], GrowthModel::power_envelope);
    r["vorticity_fit"] = fit_json(series[1], GrowthModel::power_envelope);
    const double half = traj[traj.size() / 2].t;
    r["accumulator_increment_first_half"] = acc.increment(0.0, half);
    r["accumulator_increment_second_half"] = acc.increment(half, T);
    r["accumulator_over_h3"] = acc.ratio();
    r["mixing_equivalence_ratio_final"] = mixing_equivalence_ratio(traj.back());
    json pts = json::array();
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const bool control = i == ys.size();
        traces[i].label = point_label(control ? "depletion_control" : "depletion", probe[i]);
        json p = {{"y", probe[i]},
                  {"control", control},
                  {"windowed_ratio", windowed_max_ratio(traces[i], 0.0, q, 3.0 * q, T)}};
        if (!control) {
            toy[i].label = point_label("toy_depletion", probe[i]);
            p["toy_windowed_ratio"] = windowed_max_ratio(toy[i], 0.0, q, 3.0 * q, T);
        }
        pts.push_back(p);
    }
    r["depletion"] = pts;
    for (NormSeries& s : traces) series.push_back(tagged(std::move(s), ctx));
    for (NormSeries& s : toy) series.push_back(tagged(std::move(s), ctx));
    write_series_csv(ctx.file("series.csv"), series, ctx.hash);
    write_json(ctx.file("report.json"), r);
    return 0;
}

// ---- suite ----

int run_suite(const Context& ctx)
{
    AcceptanceOptions ao;
    ao.jobs = ctx.opts.jobs;
    ao.on_result = [](const CriterionResult& res) { std::cout << format_line(res) << std::endl; };
    const std::vector<CriterionResult> results = run_acceptance(ctx.cfg, ao);
    json r = ctx.report("suite");
    json crit = json::array();
    bool all = true;
    for (const CriterionResult& res : results) {
        crit.push_back(to_json(res));
        all = all && res.pass;
    }
    r["all_pass"] = all;
    r["criteria"] = crit;
    write_json(ctx.file("report.json"), r);
    return all ? 0 : 1;
}

}  // namespace

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"evolve", "toy", "resolvent-scan", "depletion-scan",
                                                "dunford", "diagnose", "suite"};
    return names;
}

int run_subcommand(std::string_view name, const RunConfig& cfg, const RunOptions& opts)
{
    const Context ctx{cfg, opts, cfg.hash_hex()};
    if (name == "evolve") return run_evolve(ctx);
    if (name == "toy") return run_toy(ctx);
    if (name == "resolvent-scan") return run_resolvent_scan(ctx);
    if (name == "depletion-scan") return run_depletion_scan(ctx);
    if (name == "dunford") return run_dunford(ctx);
    if (name == "diagnose") return run_diagnose(ctx);
    if (name == "suite") return run_suite(ctx);
    fail(ErrorKind::invalid_argument, "unknown subcommand " + std::string(name));
}

}  // namespace mhdlab::app
