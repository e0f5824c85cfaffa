#include "mhdlab/local_sturmian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mhdlab/dense.hpp"
#include "mhdlab/errors.hpp"

namespace mhdlab {

namespace {

constexpr cplx I{0.0, 1.0};

Side other(Side s) { return s == Side::plus ? Side::minus : Side::plus; }

// 1/cosh(x) without overflow.
double sech(double x)
{
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

double max_abs(const std::vector<cplx>& v)
{
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

// Uniform panels of at most `h` on [a, b].
PanelGrid uniform_grid(double a, double b, double h)
{
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / h - 1e-9)));
    std::vector<double> e(m + 1);
    for (std::size_t i = 0; i <= m; ++i) e[i] = a + (b - a) * double(i) / double(m);
    e.back() = b;
    return PanelGrid(std::move(e));
}

}  // namespace

SturmianFrame::SturmianFrame(const ElsasserPair& pair, Side side, double origin, cplx dz0)
    : pair_(&pair), side_(side), origin_(origin), dz0_(dz0)
{
    zs0_ = pair.z_at(side, origin).v;
    c_ = zs0_ - dz0;
}

cplx SturmianFrame::zs_minus_c(double s) const { return pair_->z_increment(side_, origin_, s) + dz0_; }

cplx SturmianFrame::zo_minus_c(double s) const { return (pair_->z_at(other(side_), origin_ + s).v - zs0_) + dz0_; }

cplx SturmianFrame::h(double s) const { return zs_minus_c(s) * zo_minus_c(s); }

cplx SturmianFrame::h_prime(double s) const
{
    const double ds = pair_->z_at(side_, origin_ + s).d1, dz = pair_->z_at(other(side_), origin_ + s).d1;
    return ds * zo_minus_c(s) + zs_minus_c(s) * dz;
}

double HomogeneousSolution::ode_residual(const SturmianFrame& frame, int alpha) const
{
    const auto nodes = grid.nodes();
    const double a2 = double(alpha) * double(alpha);
    std::vector<cplx> q(nodes.size()), rhs(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const cplx h = frame.h(nodes[i]);
        q[i] = h * dvarphi[i];
        rhs[i] = a2 * h * varphi[i];
    }
    // Two first-order checks: φ′ against the numerical derivative of φ, and (Hφ′)′ against α²Hφ.
    const std::vector<cplx> dphi_num = grid.differentiate(varphi);
    const std::vector<cplx> dq = grid.differentiate(q);
    double r1 = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        r1 = std::max(r1, std::abs(dphi_num[i] - dvarphi[i]));
        r2 = std::max(r2, std::abs(dq[i] - rhs[i]));
    }
    const double s1 = std::max(max_abs(dvarphi), 1e-300), s2 = std::max(max_abs(rhs), 1e-300);
    if (a2 == 0.0) return r1;
    return std::max(r1 / s1, r2 / s2);
}

HomogeneousSolution homogeneous_neumann(const SturmianFrame& frame, int alpha, const PanelGrid& grid,
                                        double turning_point)
{
    (void)grid.breakpoint_index(turning_point);
    const auto nodes = grid.nodes();
    const std::size_t n = nodes.size();
    const double a2 = double(alpha) * double(alpha);

    std::vector<cplx> h(n);
    double zo_max = 0.0, zo_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = frame.h(nodes[i]);
        const double zo = std::abs(frame.zo_minus_c(nodes[i]));
        zo_max = std::max(zo_max, zo);
        zo_min = std::min(zo_min, zo);
    }
    // C₀ bounds S on the interval: length² times the spread of the regular factor.
    const double len = grid.hi() - grid.lo();
    const double c0 = len * len * zo_max / zo_min;
    const double A = std::max(2.0 * std::abs(double(alpha)) * std::sqrt(c0), 8.0);
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) weight[i] = sech(A * (nodes[i] - turning_point));

    auto apply_S = [&](const std::vector<cplx>& f) {
        std::vector<cplx> hf(n);
        for (std::size_t i = 0; i < n; ++i) hf[i] = h[i] * f[i];
        std::vector<cplx> inner = grid.cumulative(hf, turning_point);
        for (std::size_t i = 0; i < n; ++i) inner[i] /= h[i];
        return grid.cumulative(inner, turning_point);
    };

    HomogeneousSolution sol;
    sol.grid = grid;
    sol.origin = frame.origin();
    sol.turning_point = turning_point;
    sol.weight_A = A;
    sol.varphi_minus_one.assign(n, cplx{});
    std::vector<cplx> term(n, cplx{1.0, 0.0});
    sol.neumann_terms = 1;
    constexpr int max_terms = 50;
    bool converged = a2 == 0.0;
    for (int k = 1; k <= max_terms && !converged; ++k) {
        term = apply_S(term);
        for (cplx& z : term) z *= a2;
        double wnorm = 0.0, unorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            require(std::isfinite(term[i].real()) && std::isfinite(term[i].imag()), ErrorKind::series_diverging,
                    "Neumann term overflowed");
            wnorm = std::max(wnorm, std::abs(term[i]) * weight[i]);
            unorm = std::max(unorm, std::abs(term[i]));
            sol.varphi_minus_one[i] += term[i];
        }
        sol.increment_norms.push_back(wnorm);
        sol.neumann_terms = k + 1;
        const double scale = 1.0 + max_abs(sol.varphi_minus_one);
        converged = wnorm < 1e-12 && unorm < 1e-15 * scale;
    }
    require(converged, ErrorKind::series_diverging,
            "Neumann series did not contract within 50 terms; split the interval");

    sol.varphi.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.varphi[i] = 1.0 + sol.varphi_minus_one[i];
    std::vector<cplx> hphi(n);
    for (std::size_t i = 0; i < n; ++i) hphi[i] = h[i] * sol.varphi[i];
    sol.dvarphi = grid.cumulative(hphi, turning_point);
    for (std::size_t i = 0; i < n; ++i) sol.dvarphi[i] *= a2 / h[i];
    return sol;
}

double find_turning_point(const ElsasserPair& pair, Side side, double c_re, double y_left, double y_right)
{
    auto f = [&](double y) { return pair.z_at(side, y).v - c_re; };
    double a = y_left, b = y_right, fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) return std::numeric_limits<double>::quiet_NaN();
    double y = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const Jet j = pair.z_at(side, y);
        const double fy = j.v - c_re;
        if (fy == 0.0) break;
        if ((fy < 0.0) == (fa < 0.0)) a = y, fa = fy;
        else b = y;
        double next = j.d1 != 0.0 ? y - fy / j.d1 : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - y) <= 1e-16 * (1.0 + std::abs(y))) return next;
        y = next;
    }
    return y;
}

HomogeneousSolution homogeneous_neumann(const ElsasserPair& pair, Side side, int alpha, cplx c, double y_left,
                                        double y_right, double turning_point)
{
    require(y_left < turning_point && turning_point < y_right, ErrorKind::window_invalid,
            "turning point must lie inside the interval");
    const SturmianFrame frame(pair, side, turning_point, pair.z_at(side, turning_point).v - c);
    const double a = y_left - turning_point, b = y_right - turning_point;
    const double h_max = std::min(0.1, 0.25 * (b - a));
    PanelGrid grid = [&] {
        if (c.imag() == 0.0) return PanelGrid::graded(a, b, {0.0}, h_max, h_max);
        const double slope = std::max(std::abs(pair.z_at(side, turning_point).d1), 1e-3);
        const double h_min = std::clamp(0.01 * std::abs(c.imag()) / slope, 1e-14, 1e-3);
        return PanelGrid::graded(a, b, {0.0}, h_min, h_max);
    }();
    return homogeneous_neumann(frame, alpha, grid, 0.0);
}

LocalProblem::LocalProblem(const ElsasserPair& pair, int alpha, const CriticalPoint& cp, cplx delta,
                           LocalWindow window)
    : pair_(&pair), alpha_(alpha), cp_(cp), frame_(pair, cp.side, cp.y0, -delta)
{
    require(alpha != 0, ErrorKind::zero_wavenumber, "alpha must be nonzero");
    const double sz = cp.z_pp > 0.0 ? 1.0 : -1.0;
    const cplx sig2 = sz * delta;
    require(delta.imag() != 0.0, ErrorKind::invalid_argument, "c_star must lie off the real axis");
    require(sig2.real() >= 0.0, ErrorKind::invalid_argument,
            "Re c_star must lie on the side of Z(y0) where turning points exist");
    require(std::abs(delta.real()) >= std::abs(delta.imag()), ErrorKind::invalid_argument,
            "need |Re c_star - Z(y0)| >= |Im c_star|");
    sigma_ = std::sqrt(sig2);
    if (sigma_.imag() < 0.0) sigma_ = -sigma_;

    s1_ = window.y1 - cp.y0;
    s2_ = window.y2 - cp.y0;
    require(s1_ < 0.0 && s2_ > 0.0, ErrorKind::window_invalid, "window must contain y0 in its interior");
    // Z_s must be strictly monotone on each half (exactly one critical point in the window).
    for (int k = 1; k <= 256; ++k) {
        const double tl = s1_ * double(k) / 256.0, tr = s2_ * double(k) / 256.0;
        require(sz * pair.z_at(cp.side, cp.y0 + tr).d1 > 0.0 && sz * pair.z_at(cp.side, cp.y0 + tl).d1 < 0.0,
                ErrorKind::window_invalid, "window contains another critical point");
    }

    // Turning points: Z_s(y0 + s) − Z_s(y0) = Re δ on each side, solved on the increment for accuracy.
    auto turning = [&](double a, double b) {
        auto f = [&](double s) { return pair.z_increment(cp.side, cp.y0, s) - delta.real(); };
        double fa = f(a), fb = f(b);
        if (fa == 0.0) return a;
        if (fa * fb > 0.0) return std::numeric_limits<double>::quiet_NaN();
        double s = std::sqrt(2.0 * std::abs(delta.real()) / std::abs(cp.z_pp)) * (a + b > 0.0 ? 1.0 : -1.0);
        if (!(s > std::min(a, b) && s < std::max(a, b))) s = 0.5 * (a + b);
        double lo = std::min(a, b), hi = std::max(a, b), flo = f(lo);
        for (int it = 0; it < 200; ++it) {
            const double fs = f(s);
            if (fs == 0.0) break;
            if ((fs < 0.0) == (flo < 0.0)) lo = s, flo = fs;
            else hi = s;
            const double d = pair.z_at(cp.side, cp.y0 + s).d1;
            double next = d != 0.0 ? s - fs / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - s) <= 1e-17 + 1e-16 * std::abs(s)) return next;
            s = next;
        }
        return s;
    };
    s_r_ = turning(0.0, s2_);
    s_l_ = turning(0.0, s1_);
    require(std::isfinite(s_r_) && std::isfinite(s_l_) && s_r_ > 0.0 && s_l_ < 0.0, ErrorKind::window_invalid,
            "turning points escape the window");
    const double margin = 1e-3 * (s2_ - s1_);
    require(s2_ - s_r_ > margin && s_l_ - s1_ > margin, ErrorKind::window_invalid,
            "window endpoints are too close to the turning points");

    // Panels shrink to a fraction of the distance between the poles V = ±σ and the real axis.
    const double v0 = std::sqrt(0.5 * std::abs(cp.z_pp));
    const double pole_distance = sigma_.imag() / v0;
    const double h_min = std::clamp(0.01 * pole_distance, 1e-14, 1e-4);
    const double h_max = std::min(0.05, 0.25 * std::min(-s1_, s2_));
    const PanelGrid right = PanelGrid::graded(0.0, s2_, {0.0, s_r_}, h_min, h_max);
    const PanelGrid left = PanelGrid::graded(s1_, 0.0, {s_l_, 0.0}, h_min, h_max);
    right_ = homogeneous_neumann(frame_, alpha, right, s_r_);
    left_ = homogeneous_neumann(frame_, alpha, left, s_l_);

    // g = 1/(2bV′) is smooth; it lives on plain panels whose nodes stay clear of s = 0.
    g_right_ = uniform_grid(0.0, s2_, 0.125);
    g_left_ = uniform_grid(s1_, 0.0, 0.125);
    auto fill = [&](const PanelGrid& grid, std::vector<cplx>& gv, std::vector<cplx>& gp) {
        gv.clear();
        for (double s : grid.nodes()) gv.emplace_back(g(s));
        gp = grid.differentiate(gv);
    };
    fill(g_right_, g_r_, gp_r_);
    fill(g_left_, g_l_, gp_l_);
}

LocalProblem LocalProblem::from_c(const ElsasserPair& pair, int alpha, const CriticalPoint& cp, cplx c_star,
                                  LocalWindow window)
{
    return LocalProblem(pair, alpha, cp, c_star - pair.z_at(cp.side, cp.y0).v, window);
}

LocalProblem LocalProblem::from_sigma(const ElsasserPair& pair, int alpha, const CriticalPoint& cp, cplx sigma,
                                      LocalWindow window)
{
    require(sigma.imag() > 0.0, ErrorKind::invalid_argument, "sigma must have Im sigma > 0");
    const double sz = cp.z_pp > 0.0 ? 1.0 : -1.0;
    return LocalProblem(pair, alpha, cp, sz * sigma * sigma, window);
}

double LocalProblem::V(double s) const
{
    const double sz = cp_.z_pp > 0.0 ? 1.0 : -1.0;
    const double inc = sz * pair_->z_increment(cp_.side, cp_.y0, s);
    return (s >= 0.0 ? 1.0 : -1.0) * std::sqrt(std::max(inc, 0.0));
}

double LocalProblem::g(double s) const
{
    const double b = pair_->profile.b_at(cp_.y0 + s).v;
    if (s == 0.0) return 1.0 / (b * std::sqrt(2.0 * std::abs(cp_.z_pp)));
    const double sz = cp_.z_pp > 0.0 ? 1.0 : -1.0;
    const double vp = sz * pair_->z_at(cp_.side, cp_.y0 + s).d1 / (2.0 * V(s));
    return 1.0 / (2.0 * b * vp);
}

double LocalProblem::g_prime(double s) const
{
    if (s >= 0.0) return g_right_.interpolate(gp_r_, std::min(s, s2_)).real();
    return g_left_.interpolate(gp_l_, std::max(s, s1_)).real();
}

SturmianLocal compute_I_integrals(const LocalProblem& p)
{
    const SturmianFrame& fr = p.frame();
    const CriticalPoint& cp = p.critical_point();
    const cplx sigma = p.sigma();
    const double sz = cp.z_pp > 0.0 ? 1.0 : -1.0;
    const double kappa = cp.side == Side::plus ? -1.0 : 1.0;
    const double lambda = -kappa * sz;
    const double g0 = p.g(0.0);

    SturmianLocal out;
    out.c_star = p.c_star();
    out.sigma = sigma;
    out.y_turning_l = cp.y0 + p.turning_l();
    out.y_turning_r = cp.y0 + p.turning_r();
    out.limit_term = -I * std::numbers::pi * lambda * g0;
    out.neumann_terms_r = p.right().neumann_terms;
    out.neumann_terms_l = p.left().neumann_terms;

    auto log_ratio = [&](double v) {
        const cplx r = (v - sigma) / (v + sigma);
        // Im r = −2v Im σ / |v + σ|²: strictly opposite in sign to v when Im σ > 0.
        require(v != 0.0 && (r.imag() < 0.0) == (v > 0.0) && r.imag() != 0.0, ErrorKind::branch_cut_violation,
                "logarithm argument on the wrong side of the branch cut at V = " + std::to_string(v));
        return std::log(r);
    };

    auto side_integrals = [&](const HomogeneousSolution& hs, double from, double to, cplx& i_full, cplx& i_one,
                              cplx& i_two) {
        const auto nodes = hs.grid.nodes();
        std::vector<cplx> full(nodes.size()), one(nodes.size()), two(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double s = nodes[i];
            const cplx h = fr.h(s), phi = hs.varphi[i], pm1 = hs.varphi_minus_one[i];
            const double b = fr.pair().profile.b_at(cp.y0 + s).v;
            full[i] = 1.0 / (h * phi * phi);
            one[i] = -(pm1 * (phi + 1.0)) / (h * phi * phi) - kappa / (2.0 * b * fr.zo_minus_c(s));
            two[i] = p.g_prime(s) * log_ratio(p.V(s));
        }
        i_full = hs.grid.integral(full, from, to);
        i_one = hs.grid.integral(one, from, to);
        i_two = hs.grid.integral(two, from, to);
    };

    cplx tail_r, tail_l;
    side_integrals(p.right(), 0.0, p.s2(), out.I_r, out.I1_r, tail_r);
    side_integrals(p.left(), p.s1(), 0.0, out.I_l, out.I1_l, tail_l);
    out.I2_r = -p.g(p.s2()) * log_ratio(p.V(p.s2())) + tail_r;
    out.I2_l = p.g(p.s1()) * log_ratio(p.V(p.s1())) + tail_l;

    const cplx split_r = 2.0 * sigma * out.I1_r + lambda * (-I * std::numbers::pi * g0 + out.I2_r);
    const cplx split_l = 2.0 * sigma * out.I1_l + lambda * (-I * std::numbers::pi * g0 + out.I2_l);
    out.identity_residual_r = std::abs(2.0 * sigma * out.I_r - split_r);
    out.identity_residual_l = std::abs(2.0 * sigma * out.I_l - split_l);
    return out;
}

cplx LocalSolution::value_at(double y) const
{
    const double s = y - origin;
    if (s >= 0.0) return grid_r.interpolate(phi_r, s);
    return grid_l.interpolate(phi_l, s);
}

LocalSolution local_explicit_solve(const LocalProblem& p, const std::function<cplx(double)>& f_star)
{
    const SturmianFrame& fr = p.frame();
    const double y0 = p.critical_point().y0;
    const HomogeneousSolution& R = p.right();
    const HomogeneousSolution& Lh = p.left();

    LocalSolution sol;
    sol.local = compute_I_integrals(p);
    sol.origin = y0;
    sol.grid_r = R.grid;
    sol.grid_l = Lh.grid;

    struct Side {
        std::vector<cplx> h, f, g, inv_hp2;
    };
    auto prepare = [&](const HomogeneousSolution& hs, double turning) {
        Side sd;
        const auto nodes = hs.grid.nodes();
        const std::size_t n = nodes.size();
        sd.h.resize(n);
        sd.f.resize(n);
        sd.inv_hp2.resize(n);
        std::vector<cplx> fphi(n);
        for (std::size_t i = 0; i < n; ++i) {
            sd.h[i] = fr.h(nodes[i]);
            sd.f[i] = f_star(y0 + nodes[i]);
            fphi[i] = sd.f[i] * hs.varphi[i];
            sd.inv_hp2[i] = 1.0 / (sd.h[i] * hs.varphi[i] * hs.varphi[i]);
        }
        sd.g = hs.grid.cumulative(fphi, turning);
        return sd;
    };
    const Side r = prepare(R, p.turning_r());
    const Side l = prepare(Lh, p.turning_l());

    auto weighted = [](const Side& sd) {
        std::vector<cplx> v(sd.g.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = sd.g[i] * sd.inv_hp2[i];
        return v;
    };
    const std::vector<cplx> gr_w = weighted(r), gl_w = weighted(l);
    SturmianLocal& loc = sol.local;
    loc.T_r = R.grid.integral(gr_w, 0.0, p.s2());
    loc.T_l = Lh.grid.integral(gl_w, 0.0, p.s1());

    std::vector<cplx> fphi_r(r.f.size()), fphi_l(l.f.size());
    for (std::size_t i = 0; i < fphi_r.size(); ++i) fphi_r[i] = r.f[i] * R.varphi[i];
    for (std::size_t i = 0; i < fphi_l.size(); ++i) fphi_l[i] = l.f[i] * Lh.varphi[i];
    const cplx pr = R.value_at(0.0), pl = Lh.value_at(0.0);
    const cplx dpr = R.derivative_at(0.0), dpl = Lh.derivative_at(0.0);
    const cplx h0 = fr.h(0.0);
    loc.L = pl * R.grid.integral(fphi_r, 0.0, p.turning_r()) - pr * Lh.grid.integral(fphi_l, 0.0, p.turning_l());

    // Unknowns (μ^r, μ^ℓ, ν^r, ν^ℓ).
    ComplexMatrix m(4, 4);
    m(0, 0) = loc.I_r, m(0, 2) = 1.0;
    m(1, 1) = loc.I_l, m(1, 3) = -1.0;
    m(2, 2) = pr, m(2, 3) = -pl;
    m(3, 0) = pl, m(3, 1) = -pr, m(3, 2) = h0 * pl * pr * dpr, m(3, 3) = -h0 * pr * pl * dpl;
    const LUFactor lu(m);
    loc.det_D = lu.determinant();
    loc.det_closed_form = h0 * pr * pl * (pl * dpr - pr * dpl) * loc.I_r * loc.I_l - pr * pr * loc.I_r - pl * pl * loc.I_l;
    require(!lu.singular() && std::abs(loc.det_D) * std::abs(p.sigma()) >= 1e-8, ErrorKind::singular_determinant,
            "|D(c*)| |sigma| = " + std::to_string(std::abs(loc.det_D) * std::abs(p.sigma())) + " < 1e-8");
    std::vector<cplx> x{-loc.T_r, loc.T_l, 0.0, loc.L};
    lu.solve(x);
    loc.mu_r = x[0], loc.mu_l = x[1], loc.nu_r = x[2], loc.nu_l = x[3];

    auto assemble = [&](const HomogeneousSolution& hs, const Side& sd, const std::vector<cplx>& gw, cplx mu, cplx nu,
                        std::vector<cplx>& phi, std::vector<cplx>& dphi) {
        const std::vector<cplx> J = hs.grid.cumulative(sd.inv_hp2, 0.0);
        const std::vector<cplx> K = hs.grid.cumulative(gw, 0.0);
        phi.resize(J.size());
        dphi.resize(J.size());
        for (std::size_t i = 0; i < J.size(); ++i) {
            const cplx w = nu + mu * J[i] + K[i];
            phi[i] = hs.varphi[i] * w;
            dphi[i] = hs.dvarphi[i] * w + (mu + sd.g[i]) / (sd.h[i] * hs.varphi[i]);
        }
    };
    assemble(R, r, gr_w, loc.mu_r, loc.nu_r, sol.phi_r, sol.dphi_r);
    assemble(Lh, l, gl_w, loc.mu_l, loc.nu_l, sol.phi_l, sol.dphi_l);

    sol.matching_value = std::abs(R.grid.interpolate(sol.phi_r, 0.0) - Lh.grid.interpolate(sol.phi_l, 0.0));
    sol.matching_flux =
        std::abs(h0 * (R.grid.interpolate(sol.dphi_r, 0.0) - Lh.grid.interpolate(sol.dphi_l, 0.0)));
    return sol;
}

LocalSolution local_explicit_solve(const LocalProblem& p, const ComplexField& f_star)
{
    const std::vector<cplx> coeffs = fourier_coefficients(f_star.values());
    return local_explicit_solve(p, [&](double y) { return interpolate_coefficients(coeffs, y); });
}

}  // namespace mhdlab
