#include "mhdlab/sturmian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "mhdlab/errors.hpp"
#include "mhdlab/fit.hpp"
#include "mhdlab/parallel.hpp"

namespace mhdlab {

namespace {

struct DerivativeColumns {
    std::vector<double> d1, d2;
};

// First columns of the (circulant, real) spectral derivative matrices, cached per n.
const DerivativeColumns& derivative_columns(const PeriodicGrid& g)
{
    static std::mutex mutex;
    static std::map<std::size_t, DerivativeColumns> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(g.size());
    if (it != cache.end()) return it->second;
    std::vector<cplx> e(g.size());
    e[0] = 1.0;
    const ComplexField unit(g, e);
    const ComplexField c1 = derivative(unit, 1), c2 = derivative(unit, 2);
    DerivativeColumns cols;
    cols.d1.resize(g.size());
    cols.d2.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        cols.d1[j] = c1[j].real();
        cols.d2[j] = c2[j].real();
    }
    return cache.emplace(g.size(), std::move(cols)).first->second;
}

}  // namespace

ComplexField RhsParts::at(cplx c) const { return f0 + c * f1; }

RhsParts rhs_parts(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile, int alpha)
{
    require(alpha != 0, ErrorKind::zero_wavenumber, "alpha must be nonzero");
    require_same_grid(psi0, phi0);
    require(psi0.grid() == profile.grid, ErrorKind::grid_mismatch, "data and profile grids differ");
    std::vector<double> inv_b(profile.b.size());
    for (std::size_t j = 0; j < inv_b.size(); ++j) inv_b[j] = 1.0 / profile.b[j];
    const ComplexField g = phi0 * std::span<const double>(inv_b);
    const ComplexField lap_g = laplacian_alpha(g, alpha);
    ComplexField f0 = -1.0 * laplacian_alpha(psi0, alpha);
    for (std::size_t j = 0; j < f0.size(); ++j) f0[j] += -profile.u[j] * lap_g[j] + profile.u_pp[j] * g[j];
    return {std::move(f0), lap_g};
}

ComplexField rhs_F(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile, int alpha, cplx c)
{
    return rhs_parts(psi0, phi0, profile, alpha).at(c);
}

SturmianDirect::SturmianDirect(const ElsasserPair& pair, int alpha)
    : grid_(pair.profile.grid),
      alpha_(alpha),
      zp_(pair.z_plus),
      zm_(pair.z_minus),
      zp_p_(pair.z_plus_p),
      zm_p_(pair.z_minus_p)
{
    require(alpha != 0, ErrorKind::zero_wavenumber, "alpha must be nonzero");
    const DerivativeColumns& cols = derivative_columns(grid_);
    d1_ = cols.d1;
    d2_ = cols.d2;
}

ComplexMatrix SturmianDirect::assemble(cplx c) const
{
    const std::size_t n = grid_.size();
    std::vector<cplx> h(n), hp(n);
    for (std::size_t j = 0; j < n; ++j) {
        h[j] = (zm_[j] - c) * (zp_[j] - c);
        hp[j] = zm_p_[j] * (zp_[j] - c) + (zm_[j] - c) * zp_p_[j];
    }
    const double a2 = double(alpha_) * double(alpha_);
    ComplexMatrix a(n, n);
    for (std::size_t l = 0; l < n; ++l) {
        cplx* col = &a(0, l);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t d = (j + n - l) % n;
            col[j] = h[j] * d2_[d] + hp[j] * d1_[d];
        }
        col[l] -= a2 * h[l];
    }
    return a;
}

LUFactor SturmianDirect::factor(cplx c) const
{
    LUFactor lu(assemble(c));
    require(lu.condition() <= near_singular_condition, ErrorKind::near_singular,
            "Sturmian operator condition estimate " + std::to_string(lu.condition()) + " at c = (" +
                std::to_string(c.real()) + ", " + std::to_string(c.imag()) + ") exceeds 1e12; refine n");
    return lu;
}

ComplexField SturmianDirect::solve(const LUFactor& lu, const ComplexField& f, bool conjugate) const
{
    require(f.grid() == grid_, ErrorKind::grid_mismatch, "rhs grid differs from operator grid");
    std::vector<cplx> x(f.values().begin(), f.values().end());
    if (conjugate) lu.solve_conjugate(x);
    else lu.solve(x);
    return ComplexField(grid_, std::move(x));
}

ComplexField SturmianDirect::flux(cplx c, const ComplexField& phi) const
{
    ComplexField q = derivative(phi, 1);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] *= (zm_[j] - c) * (zp_[j] - c);
    return q;
}

ResolventSample SturmianDirect::sample(cplx c, const ComplexField& f) const
{
    const LUFactor lu = factor(c);
    ComplexField phi = solve(lu, f);
    ComplexField q = flux(c, phi);
    return {c, alpha_, std::move(phi), std::move(q), f, lu.condition()};
}

ResolventSample solve_resolvent_direct(const ComplexField& f, const ShearProfile& profile, int alpha, cplx c)
{
    return SturmianDirect(elsasser(profile), alpha).sample(c, f);
}

FluxResiduals flux_residuals(const ResolventSample& s, const ShearProfile& profile)
{
    const PeriodicGrid& g = s.phi.grid();
    const ElsasserPair pair = elsasser(profile);
    const double a2 = double(s.alpha) * double(s.alpha);
    const ComplexField dq = derivative(s.q, 1), ddq = derivative(s.q, 2), df = derivative(s.f_rhs, 1);
    ComplexField r1(g), hphi(g), r2(g), hpphi(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const cplx h = (pair.z_minus[j] - s.c) * (pair.z_plus[j] - s.c);
        const cplx hp = pair.z_minus_p[j] * (pair.z_plus[j] - s.c) + (pair.z_minus[j] - s.c) * pair.z_plus_p[j];
        hphi[j] = a2 * h * s.phi[j];
        hpphi[j] = a2 * hp * s.phi[j];
        r1[j] = dq[j] - hphi[j] - s.f_rhs[j];
        r2[j] = ddq[j] - a2 * s.q[j] - df[j] - hpphi[j];
    }
    const double fn = l2_norm(s.f_rhs);
    const double scale2 = std::max({l2_norm(ddq), a2 * l2_norm(s.q), l2_norm(df), l2_norm(hpphi)});
    return {fn > 0.0 ? l2_norm(r1) / fn : l2_norm(r1), scale2 > 0.0 ? l2_norm(r2) / scale2 : l2_norm(r2)};
}

ScanTable resolvent_uniform_scan(const RhsFamily& f, const ShearProfile& profile, int alpha,
                                 std::span<const cplx> c_grid, int jobs)
{
    const SturmianDirect op(elsasser(profile), alpha);
    ScanTable table;
    table.rows.resize(c_grid.size());
    parallel_for(c_grid.size(), jobs, [&](std::size_t i) {
        const cplx c = c_grid[i];
        require(c.imag() != 0.0, ErrorKind::invalid_argument, "scan points must lie off the real axis");
        const ComplexField rhs = f(profile.grid, c);
        const ResolventSample s = op.sample(c, rhs);
        ScanRow& row = table.rows[i];
        row.c = c;
        row.phi_l2 = l2_norm(s.phi);
        row.q_h1 = h1_norm(s.q);
        row.f_h1 = h1_norm(rhs);
        row.ratio = row.f_h1 > 0.0 ? (row.phi_l2 + row.q_h1) / row.f_h1 : 0.0;
        row.condition = s.condition;
    });
    for (const ScanRow& r : table.rows) table.max_ratio = std::max(table.max_ratio, r.ratio);
    return table;
}

double strip_half_width(const ShearProfile& profile) { return (profile.min_b() - profile.max_abs_u()) / 3.0; }

DepletionResult depletion_exponents(const ShearProfile& profile, int alpha, const CriticalPoint& y0,
                                    const RhsFamily& f, std::span<const double> eps_list,
                                    std::span<const std::size_t> grid_sizes, double control_y, int jobs,
                                    bool require_fit)
{
    require(eps_list.size() >= 2, ErrorKind::invalid_argument, "need at least two eps values");
    require(grid_sizes.size() == eps_list.size() || grid_sizes.size() == 1, ErrorKind::invalid_argument,
            "grid_sizes must have one entry or one per eps");
    for (std::size_t k = 0; k + 1 < eps_list.size(); ++k)
        require(eps_list[k + 1] < eps_list[k] && eps_list[k + 1] > 0.0, ErrorKind::invalid_argument,
                "eps_list must decrease toward 0");

    DepletionResult out;
    out.rows.resize(eps_list.size());
    parallel_for(eps_list.size(), jobs, [&](std::size_t k) {
        const std::size_t n = grid_sizes.size() == 1 ? grid_sizes[0] : grid_sizes[k];
        const ShearProfile p = build_profile(profile.u_spec, profile.b_spec, PeriodicGrid(n));
        const ElsasserPair pair = elsasser(p);
        const cplx c(y0.z_value, eps_list[k]);
        const ResolventSample s = SturmianDirect(pair, alpha).sample(c, f(p.grid, c));
        const ComplexField dphi = derivative(s.phi, 1);
        DepletionRow& row = out.rows[k];
        row.eps = eps_list[k];
        row.n = n;
        row.scale = std::abs((pair.z_at(Side::plus, y0.y0).v - c) * (pair.z_at(Side::minus, y0.y0).v - c));
        row.abs_phi = std::abs(interpolate(s.phi, y0.y0));
        row.abs_dphi = std::abs(interpolate(dphi, y0.y0));
        row.abs_phi_control = std::abs(interpolate(s.phi, control_y));
        row.condition = s.condition;
    });
    std::vector<double> x, yp, yd;
    for (const DepletionRow& r : out.rows) {
        x.push_back(std::log(r.scale));
        yp.push_back(std::log(r.abs_phi));
        yd.push_back(std::log(r.abs_dphi));
    }
    const LinearFit fp = fit_line(x, yp), fd = fit_line(x, yd);
    out.p_phi = fp.slope;
    out.p_dphi = fd.slope;
    out.residual_phi = fp.residual;
    out.residual_dphi = fd.residual;
    require(!require_fit || (fp.residual <= 0.1 && fd.residual <= 0.1), ErrorKind::fit_unstable,
            "depletion fit residual too large (" + std::to_string(fp.residual) + ", " + std::to_string(fd.residual) +
                ")");
    return out;
}

BoundaryLimits boundary_limits(const RhsFamily& f, const ShearProfile& profile, int alpha, double c,
                               std::span<const double> eps_list)
{
    const ElsasserPair pair = elsasser(profile);
    return boundary_limits(SturmianDirect(pair, alpha), f, c, eps_list);
}

BoundaryLimits boundary_limits(const SturmianDirect& op, const RhsFamily& f, double c, std::span<const double> eps_list,
                               bool require_cauchy)
{
    require(eps_list.size() >= 2, ErrorKind::invalid_argument, "need at least two eps levels");
    for (std::size_t k = 0; k + 1 < eps_list.size(); ++k)
        require(eps_list[k + 1] < eps_list[k] && eps_list[k + 1] > 0.0, ErrorKind::invalid_argument,
                "eps_list must decrease toward 0");
    const PeriodicGrid& g = op.grid();

    std::vector<ComplexField> plus, minus;
    for (double eps : eps_list) {
        const cplx cp(c, eps), cm(c, -eps);
        const LUFactor lu = op.factor(cp);
        plus.push_back(op.solve(lu, f(g, cp)));
        minus.push_back(op.solve(lu, f(g, cm), true));
    }

    BoundaryLimits out{c, {eps_list.begin(), eps_list.end()}, plus.back(), minus.back(), ComplexField(g),
                       ComplexField(g), {}, {}};
    for (std::size_t k = 0; k + 1 < plus.size(); ++k) {
        out.d_plus.push_back(lp_norm(plus[k] - plus[k + 1], 1.5));
        out.d_minus.push_back(lp_norm(minus[k] - minus[k + 1], 1.5));
    }
    std::vector<cplx> vp(plus.size()), vm(minus.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        for (std::size_t k = 0; k < plus.size(); ++k) {
            vp[k] = plus[k][j];
            vm[k] = minus[k][j];
        }
        out.phi_plus[j] = extrapolate_to_zero(eps_list, vp);
        out.phi_minus[j] = extrapolate_to_zero(eps_list, vm);
    }
    out.phi_plus.check_finite();
    out.phi_minus.check_finite();

    auto decreasing = [](const std::vector<double>& d) {
        const std::size_t first = d.size() > 4 ? d.size() - 4 : 0;
        for (std::size_t k = first; k + 1 < d.size(); ++k)
            if (!(d[k + 1] < d[k]) && d[k] > 0.0) return false;
        return true;
    };
    require(!require_cauchy || (decreasing(out.d_plus) && decreasing(out.d_minus)), ErrorKind::not_converging,
            "Cauchy differences of Phi(c +- i eps) do not decrease over the last levels");
    return out;
}

}  // namespace mhdlab
