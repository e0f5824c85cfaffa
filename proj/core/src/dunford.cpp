#include "mhdlab/dunford.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mhdlab/errors.hpp"
#include "mhdlab/parallel.hpp"
#include "mhdlab/quadrature.hpp"
#include "mhdlab/sturmian.hpp"

namespace mhdlab {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr int gl_order = 16;

double l2_pair(const ComplexField& a, const ComplexField& b)
{
    return std::hypot(l2_norm(a), l2_norm(b));
}

}  // namespace

ContourSpec build_contour(const ElsasserPair& pair, double epsilon, int nodes_per_edge)
{
    const double strip = strip_half_width(pair.profile);
    require(epsilon > 0.0 && epsilon < strip, ErrorKind::epsilon_too_large,
            "contour offset " + std::to_string(epsilon) + " must lie in (0, " + std::to_string(strip) + ")");
    ContourSpec out;
    out.epsilon = epsilon;
    out.ranges = {SpectralRange{pair.range_min(Side::plus), pair.range_max(Side::plus)},
                  SpectralRange{pair.range_min(Side::minus), pair.range_max(Side::minus)}};
    require(out.ranges[1].hi < out.ranges[0].lo, ErrorKind::range_overlap, "Elsasser ranges overlap");

    const auto per_edge = static_cast<std::size_t>(std::max(1, (nodes_per_edge + gl_order - 1) / gl_order));
    for (const SpectralRange& r : out.ranges) {
        const double x0 = r.lo - epsilon, x1 = r.hi + epsilon;
        const auto horiz = std::max(per_edge, static_cast<std::size_t>(std::ceil((x1 - x0) / epsilon - 1e-9)));
        const LineRule top = composite_gauss(x0, x1, horiz, gl_order);
        const LineRule side = composite_gauss(0.0, epsilon, 1, gl_order);
        // Upper half, counterclockwise: right edge up, top edge leftward, left edge down.
        for (std::size_t k = 0; k < side.x.size(); ++k) {
            out.nodes.emplace_back(x1, side.x[k]);
            out.weights.push_back(I * side.w[k]);
        }
        for (std::size_t k = top.x.size(); k-- > 0;) {
            out.nodes.emplace_back(top.x[k], epsilon);
            out.weights.emplace_back(-top.w[k]);
        }
        for (std::size_t k = side.x.size(); k-- > 0;) {
            out.nodes.emplace_back(x0, side.x[k]);
            out.weights.push_back(-I * side.w[k]);
        }
    }
    out.upper = out.nodes.size();
    for (std::size_t k = 0; k < out.upper; ++k) {
        out.nodes.push_back(std::conj(out.nodes[k]));
        out.weights.push_back(-std::conj(out.weights[k]));
    }
    return out;
}

SpectralState reconstruct_contour(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile,
                                  int alpha, double t, const ContourSpec& contour, int jobs)
{
    require(t >= 0.0, ErrorKind::invalid_argument, "t must be nonnegative");
    require(std::abs(double(alpha)) * t * contour.epsilon <= 5.0, ErrorKind::epsilon_too_large,
            "|alpha| t eps exceeds 5; use the jump reconstruction");
    const ElsasserPair pair = elsasser(profile);
    const SturmianDirect op(pair, alpha);
    const RhsParts parts = rhs_parts(psi0, phi0, profile, alpha);
    const PeriodicGrid& g = profile.grid;

    std::vector<double> inv_b(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) inv_b[j] = 1.0 / profile.b[j];
    const ComplexField phi0_over_b = phi0 * std::span<const double>(inv_b);

    const std::size_t m = contour.upper;
    std::vector<ComplexField> psi_c(2 * m, ComplexField(g)), phi_c(2 * m, ComplexField(g));
    auto contribution = [&](std::size_t k, const ComplexField& phi) {
        const cplx c = contour.nodes[k];
        const cplx w = contour.weights[k] * std::exp(-I * double(alpha) * t * c) / (2.0 * std::numbers::pi * I);
        ComplexField psi1(g), phi1(g);
        for (std::size_t j = 0; j < g.size(); ++j) {
            psi1[j] = w * ((profile.u[j] - c) * phi[j] + phi0_over_b[j]);
            phi1[j] = w * (profile.b[j] * phi[j]);
        }
        psi_c[k] = std::move(psi1);
        phi_c[k] = std::move(phi1);
    };
    parallel_for(m, jobs, [&](std::size_t k) {
        const cplx c = contour.nodes[k];
        const LUFactor lu = op.factor(c);
        contribution(k, op.solve(lu, parts.at(c)));
        contribution(k + m, op.solve(lu, parts.at(std::conj(c)), true));
    });

    SpectralState out;
    out.alpha = alpha;
    out.t = t;
    out.psi_hat = ComplexField(g);
    out.phi_hat = ComplexField(g);
    for (std::size_t k = 0; k < 2 * m; ++k) {
        out.psi_hat += psi_c[k];
        out.phi_hat += phi_c[k];
    }
    return out;
}

JumpDensity build_jump_density(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile,
                               int alpha, const JumpOptions& options, int jobs)
{
    require(options.levels >= 2 && options.eps0 > 0.0 && options.ratio > 0.0 && options.ratio < 1.0 &&
                options.panel > 0.0 && options.margin >= 0.0,
            ErrorKind::invalid_argument, "invalid jump-density options");
    const ElsasserPair pair = elsasser(profile);
    const SturmianDirect op(pair, alpha);
    const RhsParts parts = rhs_parts(psi0, phi0, profile, alpha);
    const RhsFamily f = [&parts](const PeriodicGrid&, cplx c) { return parts.at(c); };

    JumpDensity out;
    out.alpha = alpha;
    for (int k = 0; k < options.levels; ++k) out.eps.push_back(options.eps0 * std::pow(options.ratio, k));

    const GaussLegendre& gl = GaussLegendre::get(gl_order);
    auto add_segment = [&](double a, double b) {
        if (b - a <= 0.0) return;
        const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / options.panel - 1e-9)));
        for (std::size_t p = 0; p < panels; ++p) {
            const double lo = a + (b - a) * double(p) / double(panels);
            const double hi = p + 1 == panels ? b : a + (b - a) * double(p + 1) / double(panels);
            out.panel_lo.push_back(lo);
            out.panel_hi.push_back(hi);
            for (int i = 0; i < gl_order; ++i) {
                out.c_samples.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[i]);
                out.weights.push_back(0.5 * (hi - lo) * gl.w[i]);
            }
        }
    };
    for (Side s : {Side::minus, Side::plus}) {
        const double lo = pair.range_min(s), hi = pair.range_max(s);
        add_segment(lo - options.margin, lo);
        add_segment(lo, hi);
        add_segment(hi, hi + options.margin);
    }

    const std::size_t m = out.c_samples.size();
    out.jump.assign(m, ComplexField(profile.grid));
    std::vector<double> sup(m, 0.0);
    parallel_for(m, jobs, [&](std::size_t k) {
        const BoundaryLimits bl = boundary_limits(op, f, out.c_samples[k], out.eps, false);
        out.jump[k] = bl.phi_minus - bl.phi_plus;
        sup[k] = std::max(l2_norm(bl.phi_plus), l2_norm(bl.phi_minus));
    });
    for (double v : sup) out.sup_boundary_norm = std::max(out.sup_boundary_norm, v);
    return out;
}

SpectralState reconstruct_jump(const JumpDensity& density, const ShearProfile& profile, double t)
{
    require(!density.jump.empty(), ErrorKind::invalid_argument, "empty jump density");
    const PeriodicGrid& g = density.jump.front().grid();
    require(g == profile.grid, ErrorKind::grid_mismatch, "density and profile grids differ");
    const double at = double(density.alpha) * t;
    const GaussLegendre& gl = GaussLegendre::get(gl_order);
    const std::size_t n = g.size();

    std::vector<cplx> psi_full(n), phi_full(n), psi_half(n), phi_half(n);
    auto accumulate = [&](cplx c, cplx w, auto&& value, std::vector<cplx>& psi, std::vector<cplx>& phi) {
        const cplx e = w * std::exp(-I * at * c) / (2.0 * std::numbers::pi * I);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx v = value(j);
            psi[j] += e * (profile.u[j] - c) * v;
            phi[j] += e * profile.b[j] * v;
        }
    };

    std::vector<double> lagrange(gl_order);
    for (std::size_t p = 0; p < density.panel_lo.size(); ++p) {
        const std::size_t first = p * gl_order;
        const double half = 0.5 * (density.panel_hi[p] - density.panel_lo[p]);
        const double mid = 0.5 * (density.panel_hi[p] + density.panel_lo[p]);
        for (int i = 0; i < gl_order; ++i) {
            const std::size_t k = first + std::size_t(i);
            accumulate(cplx(density.c_samples[k]), cplx(density.weights[k]),
                       [&](std::size_t j) { return density.jump[k][j]; }, psi_full, phi_full);
        }
        for (int h = 0; h < 2; ++h) {
            for (int i = 0; i < gl_order; ++i) {
                const double x = 0.5 * (gl.x[i] + (h == 0 ? -1.0 : 1.0));  // reference coordinate in the parent
                double denom = 0.0;
                for (int q = 0; q < gl_order; ++q) {
                    lagrange[q] = gl.bary[q] / (x - gl.x[q]);
                    denom += lagrange[q];
                }
                for (double& l : lagrange) l /= denom;
                const double c = mid + half * x;
                const double w = 0.5 * half * gl.w[i];
                accumulate(cplx(c), cplx(w),
                           [&](std::size_t j) {
                               cplx v{};
                               for (int q = 0; q < gl_order; ++q) v += lagrange[q] * density.jump[first + q][j];
                               return v;
                           },
                           psi_half, phi_half);
            }
        }
    }

    SpectralState out;
    out.alpha = density.alpha;
    out.t = t;
    out.psi_hat = ComplexField(g, psi_full);
    out.phi_hat = ComplexField(g, phi_full);
    const ComplexField dpsi = out.psi_hat - ComplexField(g, psi_half), dphi = out.phi_hat - ComplexField(g, phi_half);
    const double scale = l2_pair(out.psi_hat, out.phi_hat);
    if (scale > 0.0) {
        const double rel = l2_pair(dpsi, dphi) / scale;
        require(rel <= 1e-3, ErrorKind::density_too_coarse,
                "panel halving changes the jump integral by " + std::to_string(rel) + " relative at t = " +
                    std::to_string(t));
    }
    return out;
}

}  // namespace mhdlab
