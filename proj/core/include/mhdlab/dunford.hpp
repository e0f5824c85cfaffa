#pragma once

#include <array>
#include <vector>

#include "mhdlab/evolution.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/profiles.hpp"

namespace mhdlab {

struct SpectralRange {
    double lo = 0.0, hi = 0.0;
};

/// Counterclockwise boundary of two rectangles [lo − ε, hi + ε] × [−ε, ε] around Ran Z₊ and Ran Z₋.
/// Nodes come in conjugate pairs: nodes[upper + k] == conj(nodes[k]).
struct ContourSpec {
    double epsilon = 0.0;
    std::array<SpectralRange, 2> ranges;  // Z₊ then Z₋
    std::vector<cplx> nodes, weights;     // weights include dc
    std::size_t upper = 0;
};

/// Edges are split into GL16 panels no longer than ε, with at least nodes_per_edge nodes on each
/// horizontal edge. EpsilonTooLarge unless ε < (min b − max|u|)/3.
ContourSpec build_contour(const ElsasserPair& pair, double epsilon, int nodes_per_edge = 64);

/// (1/2πi) ∮ e^{−iαtc} ((u − c)Φ + φ̂₀/b, bΦ) dc. EpsilonTooLarge if |α|·t·ε > 5.
SpectralState reconstruct_contour(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile,
                                  int alpha, double t, const ContourSpec& contour, int jobs = 1);

struct JumpOptions {
    double eps0 = 0.04;
    int levels = 5;
    double ratio = 0.70710678118654752;  // ε_{k+1}/ε_k
    double panel = 0.02;
    double margin = 0.05;
};

/// Φ̃ = Φ⁻ − Φ⁺ at GL16 nodes of panels covering [lo − margin, hi + margin] for each range,
/// with the range endpoints as breakpoints.
struct JumpDensity {
    int alpha = 1;
    std::vector<double> panel_lo, panel_hi;  // panel p owns nodes [16p, 16p + 16)
    std::vector<double> c_samples, weights;
    std::vector<ComplexField> jump;
    std::vector<double> eps;
    double sup_boundary_norm = 0.0;  // max over c of max(‖Φ⁺‖, ‖Φ⁻‖)
};

JumpDensity build_jump_density(const ComplexField& psi0, const ComplexField& phi0, const ShearProfile& profile,
                               int alpha, const JumpOptions& options = {}, int jobs = 1);

/// (1/2πi) ∫ e^{−iαtc} ((u − c)Φ̃, bΦ̃) dc over the sampled ranges. DensityTooCoarse if replacing each
/// panel by two half panels (density interpolated) moves the result by more than 1e-3 relative.
SpectralState reconstruct_jump(const JumpDensity& density, const ShearProfile& profile, double t);

}  // namespace mhdlab
