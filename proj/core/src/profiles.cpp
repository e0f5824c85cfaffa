#include "mhdlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhdlab/errors.hpp"

namespace mhdlab {

std::string_view family_name(ProfileFamily f) noexcept
{
    switch (f) {
    case ProfileFamily::constant: return "constant";
    case ProfileFamily::sine: return "sine";
    case ProfileFamily::cosine_sum: return "cosine-sum";
    case ProfileFamily::tanh_jet: return "tanh-jet";
    }
    return "constant";
}

ProfileFamily parse_family(std::string_view name)
{
    if (name == "constant") return ProfileFamily::constant;
    if (name == "sine") return ProfileFamily::sine;
    if (name == "cosine-sum" || name == "cosine_sum" || name == "cosine") return ProfileFamily::cosine_sum;
    if (name == "tanh-jet" || name == "tanh_jet") return ProfileFamily::tanh_jet;
    fail(ErrorKind::invalid_argument, "unknown profile family '" + std::string(name) + "'");
}

ProfileSpec ProfileSpec::constant(double value) { return {ProfileFamily::constant, value, {}, 1.0}; }

ProfileSpec ProfileSpec::sine(double offset, double amplitude, int wavenumber)
{
    return {ProfileFamily::sine, offset, {{amplitude, wavenumber}}, 1.0};
}

ProfileSpec ProfileSpec::cosine(double offset, double amplitude, int wavenumber)
{
    return {ProfileFamily::cosine_sum, offset, {{amplitude, wavenumber}}, 1.0};
}

ProfileSpec ProfileSpec::tanh_jet(double offset, double amplitude, double steepness, int wavenumber)
{
    return {ProfileFamily::tanh_jet, offset, {{amplitude, wavenumber}}, steepness};
}

void ProfileSpec::validate() const
{
    require(std::isfinite(offset) && std::isfinite(steepness), ErrorKind::invalid_argument,
            "profile parameters must be finite");
    for (const Mode& m : modes)
        require(std::isfinite(m.amplitude), ErrorKind::invalid_argument, "profile amplitude must be finite");
    if (family == ProfileFamily::tanh_jet)
        require(modes.size() == 1, ErrorKind::invalid_argument, "tanh-jet takes exactly one (amplitude, wavenumber)");
}

Jet ProfileSpec::eval(double y) const
{
    Jet j{offset, 0.0, 0.0};
    switch (family) {
    case ProfileFamily::constant: break;
    case ProfileFamily::sine:
        for (const Mode& m : modes) {
            const double k = m.wavenumber, s = std::sin(k * y), c = std::cos(k * y);
            j.v += m.amplitude * s;
            j.d1 += m.amplitude * k * c;
            j.d2 -= m.amplitude * k * k * s;
        }
        break;
    case ProfileFamily::cosine_sum:
        for (const Mode& m : modes) {
            const double k = m.wavenumber, s = std::sin(k * y), c = std::cos(k * y);
            j.v += m.amplitude * c;
            j.d1 -= m.amplitude * k * s;
            j.d2 -= m.amplitude * k * k * c;
        }
        break;
    case ProfileFamily::tanh_jet: {
        const Mode& m = modes.front();
        const double k = m.wavenumber, kap = steepness;
        const double g = kap * std::sin(k * y), g1 = kap * k * std::cos(k * y), g2 = -kap * k * k * std::sin(k * y);
        const double t = std::tanh(g), sech2 = 1.0 - t * t;
        j.v += m.amplitude * t;
        j.d1 = m.amplitude * sech2 * g1;
        j.d2 = m.amplitude * (sech2 * g2 - 2.0 * t * sech2 * g1 * g1);
        break;
    }
    }
    return j;
}

double ProfileSpec::increment(double y0, double s) const
{
    double d = 0.0;
    switch (family) {
    case ProfileFamily::constant: break;
    case ProfileFamily::sine:
        for (const Mode& m : modes) {
            const double k = m.wavenumber;
            d += 2.0 * m.amplitude * std::cos(k * y0 + 0.5 * k * s) * std::sin(0.5 * k * s);
        }
        break;
    case ProfileFamily::cosine_sum:
        for (const Mode& m : modes) {
            const double k = m.wavenumber;
            d -= 2.0 * m.amplitude * std::sin(k * y0 + 0.5 * k * s) * std::sin(0.5 * k * s);
        }
        break;
    case ProfileFamily::tanh_jet: {
        const Mode& m = modes.front();
        const double k = m.wavenumber;
        const double g0 = steepness * std::sin(k * y0), g1 = steepness * std::sin(k * (y0 + s));
        const double dg = 2.0 * steepness * std::cos(k * y0 + 0.5 * k * s) * std::sin(0.5 * k * s);
        d = m.amplitude * std::sinh(dg) / (std::cosh(g0) * std::cosh(g1));
        break;
    }
    }
    return d;
}

double ShearProfile::max_abs_u() const
{
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

double ShearProfile::min_b() const { return *std::min_element(b.begin(), b.end()); }

ShearProfile build_profile(const ProfileSpec& u, const ProfileSpec& b, PeriodicGrid grid)
{
    u.validate();
    b.validate();
    ShearProfile p;
    p.grid = grid;
    p.u_spec = u;
    p.b_spec = b;
    const std::size_t n = grid.size();
    for (auto* v : {&p.u, &p.u_p, &p.u_pp, &p.b, &p.b_p, &p.b_pp}) v->resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Jet ju = u.eval(grid.node(j)), jb = b.eval(grid.node(j));
        p.u[j] = ju.v;
        p.u_p[j] = ju.d1;
        p.u_pp[j] = ju.d2;
        p.b[j] = jb.v;
        p.b_p[j] = jb.d1;
        p.b_pp[j] = jb.d2;
    }
    // Checked on a 4x denser sampling too, so a violation between nodes is not missed.
    const std::size_t dense = 4 * n;
    double min_b = 1e300, min_gap = 1e300;
    for (std::size_t j = 0; j < dense; ++j) {
        const double y = two_pi * double(j) / double(dense);
        const double bv = b.eval(y).v, uv = u.eval(y).v;
        min_b = std::min(min_b, bv);
        min_gap = std::min(min_gap, bv - std::abs(uv));
    }
    require(min_b > 0.0, ErrorKind::degenerate_field, "min b = " + std::to_string(min_b) + " <= 0");
    require(min_gap > 0.0, ErrorKind::stability_violation,
            "Stern condition b > |u| fails: min(b - |u|) = " + std::to_string(min_gap));
    const double err = derivative_consistency(p);
    require(err < 1e-8, ErrorKind::under_resolved_profile,
            "profile derivatives inconsistent with spectral differentiation (err " + std::to_string(err) +
                "); increase n");
    return p;
}

double derivative_consistency(const ShearProfile& p)
{
    auto as_field = [&](const std::vector<double>& v) {
        return ComplexField(p.grid, std::vector<cplx>(v.begin(), v.end()));
    };
    double err = 0.0;
    auto cmp = [&](const ComplexField& f, const std::vector<double>& ref) {
        for (std::size_t j = 0; j < ref.size(); ++j) err = std::max(err, std::abs(f[j] - ref[j]));
    };
    const ComplexField u = as_field(p.u), b = as_field(p.b);
    cmp(derivative(u, 1), p.u_p);
    cmp(derivative(u, 2), p.u_pp);
    cmp(derivative(b, 1), p.b_p);
    cmp(derivative(b, 2), p.b_pp);
    return err;
}

std::string_view side_name(Side s) noexcept { return s == Side::plus ? "+" : "-"; }

Jet ElsasserPair::z_at(Side s, double y) const
{
    const Jet ju = profile.u_at(y), jb = profile.b_at(y);
    const double sg = side_sign(s);
    return {ju.v + sg * jb.v, ju.d1 + sg * jb.d1, ju.d2 + sg * jb.d2};
}

double ElsasserPair::z_increment(Side s, double y0, double h) const
{
    return profile.u_spec.increment(y0, h) + side_sign(s) * profile.b_spec.increment(y0, h);
}

namespace {

constexpr double flat_tolerance = 1e-12;

bool is_flat(const ElsasserPair& pair, Side s, std::size_t samples)
{
    for (std::size_t j = 0; j < samples; ++j)
        if (std::abs(pair.z_at(s, two_pi * double(j) / double(samples)).d1) > flat_tolerance) return false;
    return true;
}

/// Roots of Z′_s on [0, 2π), polished by safeguarded Newton.
std::vector<double> derivative_roots(const ElsasserPair& pair, Side s, std::size_t samples)
{
    std::vector<double> roots;
    auto dz = [&](double y) { return pair.z_at(s, y).d1; };
    const double h = two_pi / double(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        double a = h * double(j), b = a + h;
        double fa = dz(a), fb = dz(b);
        if (fa == 0.0) {
            roots.push_back(a);
            continue;
        }
        if (fa * fb > 0.0 || fb == 0.0) continue;
        double y = 0.5 * (a + b);
        for (int it = 0; it < 100; ++it) {
            const Jet jz = pair.z_at(s, y);
            if (std::abs(jz.d1) < 1e-15) break;
            if ((jz.d1 < 0.0) == (fa < 0.0)) a = y, fa = jz.d1;
            else b = y;
            double next = jz.d2 != 0.0 ? y - jz.d1 / jz.d2 : 0.5 * (a + b);
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (std::abs(next - y) < 1e-16 * (1.0 + std::abs(y))) {
                y = next;
                break;
            }
            y = next;
        }
        roots.push_back(std::fmod(y + two_pi, two_pi));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(), [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                roots.end());
    if (roots.size() > 1 && roots.back() - roots.front() > two_pi - 1e-9) roots.pop_back();
    return roots;
}

std::size_t dense_samples(const ElsasserPair& pair) { return std::max<std::size_t>(4096, 8 * pair.z_plus.size()); }

}  // namespace

double ElsasserPair::range_min(Side s) const
{
    double m = *std::min_element(z(s).begin(), z(s).end());
    for (double y : derivative_roots(*this, s, dense_samples(*this))) m = std::min(m, z_at(s, y).v);
    return m;
}

double ElsasserPair::range_max(Side s) const
{
    double m = *std::max_element(z(s).begin(), z(s).end());
    for (double y : derivative_roots(*this, s, dense_samples(*this))) m = std::max(m, z_at(s, y).v);
    return m;
}

ElsasserPair elsasser(const ShearProfile& profile)
{
    ElsasserPair e;
    e.profile = profile;
    const std::size_t n = profile.u.size();
    for (auto* v : {&e.z_plus, &e.z_minus, &e.z_plus_p, &e.z_minus_p, &e.z_plus_pp, &e.z_minus_pp}) v->resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        e.z_plus[j] = profile.u[j] + profile.b[j];
        e.z_minus[j] = profile.u[j] - profile.b[j];
        e.z_plus_p[j] = profile.u_p[j] + profile.b_p[j];
        e.z_minus_p[j] = profile.u_p[j] - profile.b_p[j];
        e.z_plus_pp[j] = profile.u_pp[j] + profile.b_pp[j];
        e.z_minus_pp[j] = profile.u_pp[j] - profile.b_pp[j];
        require(e.z_plus[j] > 0.0 && e.z_minus[j] < 0.0, ErrorKind::range_overlap,
                "Z+ > 0 > Z- fails at node " + std::to_string(j));
    }
    return e;
}

std::vector<CriticalPoint> CriticalPointSet::on_side(Side s) const
{
    std::vector<CriticalPoint> r;
    for (const CriticalPoint& c : points)
        if (c.side == s) r.push_back(c);
    return r;
}

CriticalPointSet find_critical_points(const ElsasserPair& pair)
{
    require(pair.z_plus.size() >= PeriodicGrid::min_points, ErrorKind::invalid_argument,
            "critical point search needs at least 64 samples");
    CriticalPointSet set;
    const std::size_t samples = dense_samples(pair);
    for (Side s : {Side::plus, Side::minus}) {
        if (is_flat(pair, s, samples)) {
            (s == Side::plus ? set.flat_plus : set.flat_minus) = true;
            continue;
        }
        for (double y : derivative_roots(pair, s, samples)) {
            const Jet j = pair.z_at(s, y);
            require(std::abs(j.d1) < 1e-10, ErrorKind::degenerate_critical,
                    "Newton polish failed at y = " + std::to_string(y));
            require(std::abs(j.d2) >= 1e-6, ErrorKind::degenerate_critical,
                    "degenerate critical point at y = " + std::to_string(y));
            set.points.push_back({y, s, j.d2, j.v});
        }
    }
    std::sort(set.points.begin(), set.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return a.y0 != b.y0 ? a.y0 < b.y0 : (a.side == Side::plus && b.side == Side::minus);
    });
    return set;
}

}  // namespace mhdlab
