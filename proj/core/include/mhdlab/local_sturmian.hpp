#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mhdlab/grid.hpp"
#include "mhdlab/profiles.hpp"
#include "mhdlab/quadrature.hpp"

namespace mhdlab {

/// Evaluates the Sturmian coefficient H = (Z_s − c)(Z_o − c) in coordinates s = y − origin.
/// Z_s − c is formed as [Z_s(origin + s) − Z_s(origin)] + [Z_s(origin) − c] so that it keeps
/// full relative accuracy when c is very close to Z_s(origin).
class SturmianFrame {
public:
    /// dz0 = Z_side(origin) − c.
    SturmianFrame(const ElsasserPair& pair, Side side, double origin, cplx dz0);

    double origin() const noexcept { return origin_; }
    Side side() const noexcept { return side_; }
    cplx c() const noexcept { return c_; }
    cplx zs_minus_c(double s) const;
    cplx zo_minus_c(double s) const;
    cplx h(double s) const;
    cplx h_prime(double s) const;
    const ElsasserPair& pair() const noexcept { return *pair_; }

private:
    const ElsasserPair* pair_;
    Side side_;
    double origin_;
    cplx dz0_, c_;
    double zs0_;
};

/// φ solving (Hφ′)′ = α²Hφ with φ(y_t) = 1, φ′(y_t) = 0, summed as Σ α^{2k} S^k 1 with
/// S f(y) = ∫_{y_t}^{y} H⁻¹ ∫_{y_t}^{y′} H f.
struct HomogeneousSolution {
    PanelGrid grid{std::vector<double>{0.0, 1.0}};  // frame coordinates
    double origin = 0.0;
    double turning_point = 0.0;  // frame coordinate
    std::vector<cplx> varphi, varphi_minus_one, dvarphi;
    int neumann_terms = 0;
    double weight_A = 8.0;
    std::vector<double> increment_norms;  // weighted sup norm of each added term

    cplx value_at(double s) const { return grid.interpolate(varphi, s); }
    cplx derivative_at(double s) const { return grid.interpolate(dvarphi, s); }
    /// max |(Hφ′)′ − α²Hφ| / max |α²Hφ| over the nodes.
    double ode_residual(const SturmianFrame& frame, int alpha) const;
};

/// Frame-coordinate construction on `grid`, whose breakpoints must include the turning point.
HomogeneousSolution homogeneous_neumann(const SturmianFrame& frame, int alpha, const PanelGrid& grid,
                                        double turning_point);

/// Absolute-coordinate convenience: interval [y_left, y_right] ∋ turning_point, Z_side − c.
HomogeneousSolution homogeneous_neumann(const ElsasserPair& pair, Side side, int alpha, cplx c, double y_left,
                                        double y_right, double turning_point);

/// Root of Z_side(y) = Re c on [y_left, y_right] (monotone branch), NaN if none.
double find_turning_point(const ElsasserPair& pair, Side side, double c_re, double y_left, double y_right);

struct LocalWindow {
    double y1 = 0.0, y2 = 0.0;  // absolute coordinates, y1 < y0 < y2
};

struct SturmianLocal {
    cplx c_star, sigma;
    double y_turning_l = 0.0, y_turning_r = 0.0;
    cplx I_r, I_l, I1_r, I1_l, I2_r, I2_l;
    cplx mu_r, mu_l, nu_r, nu_l;
    cplx det_D;
    cplx T_r, T_l, L;
    cplx det_closed_form;      // H₀φ_rφ_l(φ_lφ_r′ − φ_rφ_l′)I^rI^ℓ − φ_r²I^r − φ_l²I^ℓ at y₀
    cplx limit_term;           // −iπ λ/(b(y₀)√(2|Z″(y₀)|)), the σ → 0 limit of 2σI^k
    double identity_residual_r = 0.0, identity_residual_l = 0.0;
    int neumann_terms_r = 0, neumann_terms_l = 0;
};

/// Everything about the window that does not depend on F★: σ, turning points, φ^ℓ, φ^r on
/// graded panel grids, and the I^k family.
class LocalProblem {
public:
    /// delta = c★ − Z_side(y₀); prefer this (or from_sigma) when c★ is within ~1e-8 of Z(y₀).
    LocalProblem(const ElsasserPair& pair, int alpha, const CriticalPoint& cp, cplx delta, LocalWindow window);
    static LocalProblem from_c(const ElsasserPair& pair, int alpha, const CriticalPoint& cp, cplx c_star,
                               LocalWindow window);
    /// σ with Im σ > 0; c★ = Z(y₀) + sign(Z″)σ².
    static LocalProblem from_sigma(const ElsasserPair& pair, int alpha, const CriticalPoint& cp, cplx sigma,
                                   LocalWindow window);

    const SturmianFrame& frame() const noexcept { return frame_; }
    const CriticalPoint& critical_point() const noexcept { return cp_; }
    int alpha() const noexcept { return alpha_; }
    cplx sigma() const noexcept { return sigma_; }
    cplx c_star() const noexcept { return frame_.c(); }
    double turning_l() const noexcept { return s_l_; }  // frame coordinates
    double turning_r() const noexcept { return s_r_; }
    double s1() const noexcept { return s1_; }
    double s2() const noexcept { return s2_; }
    const HomogeneousSolution& left() const noexcept { return left_; }
    const HomogeneousSolution& right() const noexcept { return right_; }
    /// V(s) = sign(s)√(sign(Z″)(Z(y₀+s) − Z(y₀))).
    double V(double s) const;
    /// 1/(2bV′) and its derivative, from a smooth auxiliary grid.
    double g(double s) const;
    double g_prime(double s) const;

private:
    const ElsasserPair* pair_;
    int alpha_;
    CriticalPoint cp_;
    SturmianFrame frame_;
    cplx sigma_;
    double s1_, s2_, s_l_, s_r_;
    HomogeneousSolution left_, right_;
    PanelGrid g_left_{std::vector<double>{0.0, 1.0}}, g_right_{std::vector<double>{0.0, 1.0}};
    std::vector<cplx> g_l_, g_r_, gp_l_, gp_r_;
};

/// I^k by direct quadrature, I₁^k and I₂^k by their defining formulas, and the splitting residuals.
/// BranchCutViolation if a logarithm argument lands on the wrong side of the cut.
SturmianLocal compute_I_integrals(const LocalProblem& problem);

struct LocalSolution {
    SturmianLocal local;
    PanelGrid grid_l{std::vector<double>{0.0, 1.0}}, grid_r{std::vector<double>{0.0, 1.0}};  // frame coordinates
    std::vector<cplx> phi_l, phi_r, dphi_l, dphi_r;
    double origin = 0.0;
    double matching_value = 0.0, matching_flux = 0.0;  // |jumps| of Φ★ and HΦ★′ at y₀

    /// Φ★ at an absolute y in the window.
    cplx value_at(double y) const;
};

/// Solves ∂(H∂Φ★) − α²HΦ★ = F★ on the window with Φ★(y₁) = Φ★(y₂) = 0 from the explicit
/// representation Φ★ = φ[ν + μJ + K] on each side of y₀. F★ takes absolute y.
/// SingularDeterminant if |𝒟|·|σ| < 1e-8.
LocalSolution local_explicit_solve(const LocalProblem& problem, const std::function<cplx(double)>& f_star);
LocalSolution local_explicit_solve(const LocalProblem& problem, const ComplexField& f_star);

}  // namespace mhdlab
