#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mhdlab/dense.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/profiles.hpp"

namespace mhdlab {

/// Solution of ∂(H∂Φ) − α²HΦ = F with H = (Z₋ − c)(Z₊ − c), and the flux q = H∂Φ.
struct ResolventSample {
    cplx c;
    int alpha = 1;
    ComplexField phi, q, f_rhs;
    double condition = 0.0;
};

/// F(c) = f0 + c·f1, with f0 = −Δψ̂₀ − uΔ(φ̂₀/b) + u″φ̂₀/b and f1 = Δ(φ̂₀/b).
/// With this sign (Ψ₁, Φ₁) = ((u − c)Φ + φ̂₀/b, bΦ) is exactly (c − M_α)⁻¹(ψ̂₀, φ̂₀) for the generator
/// used by evolve().
struct RhsParts {
    ComplexField f0, f1;
    ComplexField at(cplx c) const;
};

RhsParts rhs_parts(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile, int alpha);
ComplexField rhs_F(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile, int alpha, cplx c);

/// Condition estimates above this raise NearSingular.
inline constexpr double near_singular_condition = 1e12;

/// Dense pseudospectral Sturmian operator for a fixed (profile, α).
class SturmianDirect {
public:
    SturmianDirect(const ElsasserPair& pair, int alpha);

    const PeriodicGrid& grid() const noexcept { return grid_; }
    int alpha() const noexcept { return alpha_; }

    /// diag(H)·D² + diag(H′)·D¹ − α² diag(H).
    ComplexMatrix assemble(cplx c) const;
    /// LU of the operator at c; NearSingular above the condition cap.
    LUFactor factor(cplx c) const;
    /// Solve at c from a factor of c (conjugate = false) or of conj(c) (conjugate = true).
    ComplexField solve(const LUFactor& lu, const ComplexField& f, bool conjugate = false) const;
    ResolventSample sample(cplx c, const ComplexField& f) const;
    /// q = H ∂Φ.
    ComplexField flux(cplx c, const ComplexField& phi) const;

private:
    PeriodicGrid grid_;
    int alpha_;
    std::vector<double> zp_, zm_, zp_p_, zm_p_;
    std::vector<double> d1_, d2_;  // first columns of the circulant derivative matrices
};

ResolventSample solve_resolvent_direct(const ComplexField& f, const ShearProfile& profile, int alpha, cplx c);

/// Relative residuals of q′ = F + α²HΦ (against ‖F‖) and of
/// q″ − α²q = F′ + α²H′Φ (against the largest term).
struct FluxResiduals {
    double eq1 = 0.0, eq2 = 0.0;
};
FluxResiduals flux_residuals(const ResolventSample& s, const ShearProfile& profile);

/// Right-hand side as a function of the grid and c (F may depend on c).
using RhsFamily = std::function<ComplexField(const PeriodicGrid&, cplx)>;

struct ScanRow {
    cplx c;
    double phi_l2 = 0.0, q_h1 = 0.0, f_h1 = 0.0, ratio = 0.0, condition = 0.0;
};

struct ScanTable {
    std::vector<ScanRow> rows;
    double max_ratio = 0.0;
};

/// Tabulates ‖Φ‖_{L²}, ‖q‖_{H¹} and (‖Φ‖ + ‖q‖_{H¹})/‖F‖_{H¹} over c_grid.
ScanTable resolvent_uniform_scan(const RhsFamily& f, const ShearProfile& profile, int alpha,
                                 std::span<const cplx> c_grid, int jobs = 1);

/// Half-width (min b − max|u|)/3 of the strip around the spectrum.
double strip_half_width(const ShearProfile& profile);

struct DepletionRow {
    double eps = 0.0;
    std::size_t n = 0;
    double scale = 0.0;  // |(Z₊(y₀) − c)(Z₋(y₀) − c)|
    double abs_phi = 0.0, abs_dphi = 0.0, abs_phi_control = 0.0;
    double condition = 0.0;
};

struct DepletionResult {
    double p_phi = 0.0, p_dphi = 0.0;
    double residual_phi = 0.0, residual_dphi = 0.0;
    std::vector<DepletionRow> rows;
};

/// Resolvent at c = Z_side(y₀) + iε for each ε on a grid of grid_sizes[k] points; fits log-log slopes of
/// |Φ(y₀)| and |∂Φ(y₀)| against |(Z₊(y₀)−c)(Z₋(y₀)−c)|. Throws FitUnstable if a fit residual exceeds 0.1,
/// unless require_fit = false, in which case the caller inspects the residuals.
DepletionResult depletion_exponents(const ShearProfile& profile, int alpha, const CriticalPoint& y0,
                                    const RhsFamily& f, std::span<const double> eps_list,
                                    std::span<const std::size_t> grid_sizes, double control_y, int jobs = 1,
                                    bool require_fit = true);

struct BoundaryLimits {
    double c = 0.0;
    std::vector<double> eps;
    ComplexField phi_plus_last, phi_minus_last;  // Φ(c ± iε) at the smallest ε
    ComplexField phi_plus, phi_minus;            // polynomial extrapolation of the ε-sequence to ε = 0
    std::vector<double> d_plus, d_minus;         // ‖Φ(ε_k) − Φ(ε_{k+1})‖_{L^{3/2}}
};

/// Limiting values Φ± = lim Φ(c ± iε). eps_list must decrease; NotConverging if the Cauchy
/// differences do not decrease over the last four levels.
BoundaryLimits boundary_limits(const RhsFamily& f, const ShearProfile& profile, int alpha, double c,
                               std::span<const double> eps_list);
/// Same, reusing an assembled operator. require_cauchy = false skips the NotConverging gate (the
/// extrapolated limits are still formed), for callers that validate the limits another way.
BoundaryLimits boundary_limits(const SturmianDirect& op, const RhsFamily& f, double c, std::span<const double> eps_list,
                               bool require_cauchy = true);

}  // namespace mhdlab
