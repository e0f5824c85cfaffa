#include "mhdlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhdlab/errors.hpp"
#include "mhdlab/fit.hpp"

namespace mhdlab {

namespace {

double sq(double x) { return x * x; }

double mean_abs(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return v.empty() ? 0.0 : s / double(v.size());
}

}  // namespace

void NormSeries::push(double t, double v)
{
    require(std::isfinite(t) && std::isfinite(v), ErrorKind::invalid_argument, "non-finite sample in " + label);
    require(times.empty() || t > times.back(), ErrorKind::invalid_argument, "times must increase in " + label);
    times.push_back(t);
    values.push_back(v);
}

NormSeries vertical_norms(std::span<const SpectralState> traj)
{
    NormSeries s{"vertical_l2", {}, {}, 0};
    for (const SpectralState& st : traj) {
        const PrimitiveFields p = primitive_fields(st);
        s.push(st.t, std::hypot(l2_norm(p.u2), l2_norm(p.h2)));
    }
    return s;
}

NormSeries vorticity_norms(std::span<const SpectralState> traj)
{
    NormSeries s{"vorticity_current_l2", {}, {}, 0};
    for (const SpectralState& st : traj) {
        const FieldPair wj = vorticity_current(st);
        s.push(st.t, std::hypot(l2_norm(wj.first), l2_norm(wj.second)));
    }
    return s;
}

double SpacetimeSeries::increment(double t0, double t1) const
{
    auto at = [&](double t) {
        const auto it = std::lower_bound(running.times.begin(), running.times.end(), t - 1e-9 * (1.0 + std::abs(t)));
        require(it != running.times.end() && std::abs(*it - t) <= 1e-9 * (1.0 + std::abs(t)),
                ErrorKind::invalid_argument, "increment endpoints must be snapshot times");
        return running.values[std::size_t(it - running.times.begin())];
    };
    return at(t1) - at(t0);
}

double SpacetimeSeries::ratio() const
{
    if (running.values.empty() || initial_h3_sq == 0.0) return 0.0;
    return running.values.back() / initial_h3_sq;
}

SpacetimeSeries spacetime_accumulator(std::span<const SpectralState> traj, const ShearProfile& profile)
{
    SpacetimeSeries out;
    out.running.label = "spacetime_accumulator";
    if (traj.empty()) return out;
    out.initial_h3_sq = sq(sobolev_norm(traj.front().psi_hat, 3.0)) + sq(sobolev_norm(traj.front().phi_hat, 3.0));
    double acc = 0.0, prev_t = 0.0, prev_v = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const SpectralState& st = traj[i];
        const FieldPair dt = apply_generator(st, profile);
        const double v = sq(l2_norm(st.psi_hat)) + sq(l2_norm(st.phi_hat)) + sq(l2_norm(dt.first)) +
                         sq(l2_norm(dt.second));
        if (i > 0) acc += 0.5 * (st.t - prev_t) * (v + prev_v);
        out.running.push(st.t, acc);
        prev_t = st.t;
        prev_v = v;
    }
    return out;
}

std::vector<NormSeries> depletion_trace(std::span<const SpectralState> traj, std::span<const double> points)
{
    std::vector<NormSeries> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) out[p].label = "depletion_y=" + std::to_string(points[p]);
    for (const SpectralState& st : traj) {
        const PrimitiveFields f = primitive_fields(st);
        const std::vector<cplx> cu = fourier_coefficients(f.u1.values()), ch = fourier_coefficients(f.h1.values());
        for (std::size_t p = 0; p < points.size(); ++p)
            out[p].push(st.t, std::abs(interpolate_coefficients(cu, points[p])) +
                                  std::abs(interpolate_coefficients(ch, points[p])));
    }
    return out;
}

std::vector<NormSeries> toy_depletion_trace(const ToyState& initial, const ShearProfile& profile,
                                            std::span<const double> times, std::span<const double> points)
{
    std::vector<NormSeries> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) out[p].label = "toy_depletion_y=" + std::to_string(points[p]);
    for (double t : times) {
        const FieldPair uh = toy_horizontal(toy_evolve(initial, profile, t));
        const std::vector<cplx> cu = fourier_coefficients(uh.first.values());
        const std::vector<cplx> ch = fourier_coefficients(uh.second.values());
        for (std::size_t p = 0; p < points.size(); ++p)
            out[p].push(t, std::abs(interpolate_coefficients(cu, points[p])) +
                               std::abs(interpolate_coefficients(ch, points[p])));
    }
    return out;
}

NormSeries toy_mixing_series(const ToyState& initial, const ShearProfile& profile, std::span<const double> times)
{
    NormSeries s{"toy_dxU1_Hm1", {}, {}, 0};
    for (double t : times) {
        const FieldPair uh = toy_horizontal(toy_evolve(initial, profile, t));
        s.push(t, std::abs(double(initial.alpha)) * sobolev_norm(uh.first, -1.0));
    }
    return s;
}

double mixing_equivalence_ratio(const SpectralState& state)
{
    const PrimitiveFields p = primitive_fields(state);
    const double a = std::abs(double(state.alpha));
    const double lhs = a * std::hypot(sobolev_norm(p.u1, -1.0), sobolev_norm(p.h1, -1.0));
    const double rhs = std::hypot(l2_norm(p.u2), l2_norm(p.h2));
    require(rhs > 0.0, ErrorKind::invalid_argument, "vertical fields vanish");
    return lhs / rhs;
}

double energy_functional(const SpectralState& state, const ShearProfile& profile, int k)
{
    require(k >= 0, ErrorKind::invalid_argument, "k must be nonnegative");
    require(state.grid() == profile.grid, ErrorKind::grid_mismatch, "state and profile grids differ");
    const PrimitiveFields p = primitive_fields(state);
    const double a = double(state.alpha);
    ComplexField corrected = p.h1;
    for (std::size_t j = 0; j < corrected.size(); ++j)
        corrected[j] -= cplx(0.0, 1.0) * (profile.b_p[j] / (a * profile.b[j])) * p.h2[j];
    const double e = sq(l2_norm(p.u1)) + sq(l2_norm(p.u2)) + sq(l2_norm(p.h2)) + sq(l2_norm(corrected));
    return std::pow(a * a, k) * e;
}

GrowthModel parse_growth_model(std::string_view name)
{
    if (name == "power") return GrowthModel::power;
    if (name == "power_envelope" || name == "power-envelope") return GrowthModel::power_envelope;
    if (name == "linear_envelope" || name == "linear-envelope") return GrowthModel::linear_envelope;
    fail(ErrorKind::invalid_argument, "unknown growth model '" + std::string(name) + "'");
}

std::string_view growth_model_name(GrowthModel m) noexcept
{
    switch (m) {
    case GrowthModel::power: return "power";
    case GrowthModel::power_envelope: return "power_envelope";
    case GrowthModel::linear_envelope: return "linear_envelope";
    }
    return "?";
}

NormSeries running_max_envelope(const NormSeries& s, std::size_t window)
{
    require(window >= 1, ErrorKind::invalid_argument, "window must be positive");
    NormSeries out{s.label + "_envelope", {}, {}, s.config_hash};
    for (std::size_t i = window - 1; i < s.size(); ++i) {
        const auto first = s.values.begin() + std::ptrdiff_t(i + 1 - window);
        out.push(s.times[i], *std::max_element(first, s.values.begin() + std::ptrdiff_t(i + 1)));
    }
    return out;
}

GrowthFit growth_fit(const NormSeries& series, GrowthModel model)
{
    require(series.size() >= 10, ErrorKind::invalid_argument, "growth fit needs at least 10 samples");
    const NormSeries s = model == GrowthModel::power ? series : running_max_envelope(series);
    require(s.size() >= 2, ErrorKind::invalid_argument, "too few samples after the envelope");
    GrowthFit out;
    out.model = model;
    if (model == GrowthModel::linear_envelope) {
        const LinearFit f = fit_line(s.times, s.values);
        const double scale = mean_abs(s.values);
        out.value = f.slope;
        out.residual = scale > 0.0 ? f.residual / scale : f.residual;
    } else {
        require(series.times.front() > 0.0 && series.times.back() >= 10.0 * series.times.front(),
                ErrorKind::invalid_argument, "power fits need times spanning a decade with t > 0");
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < s.size(); ++i) {
            require(s.values[i] > 0.0, ErrorKind::fit_unstable, "power fit of a nonpositive value");
            lx.push_back(std::log(s.times[i]));
            ly.push_back(std::log(s.values[i]));
        }
        const LinearFit f = fit_line(lx, ly);
        out.value = f.slope;
        out.residual = f.residual;
    }
    require(out.residual <= 0.1, ErrorKind::fit_unstable,
            "fit residual " + std::to_string(out.residual) + " exceeds 0.1 for " + series.label);
    return out;
}

double windowed_max_ratio(const NormSeries& s, double early_lo, double early_hi, double late_lo, double late_hi)
{
    auto window_max = [&](double lo, double hi) {
        double m = -1.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.times[i] >= lo && s.times[i] <= hi) m = std::max(m, s.values[i]);
        require(m >= 0.0, ErrorKind::invalid_argument, "empty window in " + s.label);
        return m;
    };
    const double early = window_max(early_lo, early_hi), late = window_max(late_lo, late_hi);
    require(early > 0.0, ErrorKind::invalid_argument, "early window maximum is zero in " + s.label);
    return late / early;
}

}  // namespace mhdlab
