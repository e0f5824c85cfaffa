#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mhdlab/grid.hpp"
#include "mhdlab/profiles.hpp"

namespace mhdlab {

/// One x-Fourier mode α of the linearized system.
struct SpectralState {
    int alpha = 1;
    ComplexField psi_hat{PeriodicGrid{PeriodicGrid::min_points}};
    ComplexField phi_hat{PeriodicGrid{PeriodicGrid::min_points}};
    double t = 0.0;

    const PeriodicGrid& grid() const noexcept { return psi_hat.grid(); }
};

/// Ẑ₁± = Û₁ ± Ĥ₁ of the decoupled transport model.
struct ToyState {
    int alpha = 1;
    ComplexField z1_plus{PeriodicGrid{PeriodicGrid::min_points}};
    ComplexField z1_minus{PeriodicGrid{PeriodicGrid::min_points}};
    double t = 0.0;
};

struct FieldPair {
    ComplexField first, second;
};

struct PrimitiveFields {
    ComplexField u1, u2, h1, h2;
};

/// −iα M_α(ψ̂, φ̂), assembled pseudospectrally.
FieldPair apply_generator(const SpectralState& state, const ShearProfile& profile);

/// 0.5 / (α max|Z±| + α² c_grid), c_grid = ‖u′‖∞ + ‖b′‖∞ + ‖u″‖∞ + ‖b″‖∞.
double dt_max(const ShearProfile& profile, int alpha);

SpectralState step_rk4(const SpectralState& state, const ShearProfile& profile, double dt);

/// Snapshots at t = 0, every sample_every steps, and at T.
std::vector<SpectralState> evolve(const SpectralState& initial, const ShearProfile& profile, double T, double dt,
                                  int sample_every);

PrimitiveFields primitive_fields(const SpectralState& state);
FieldPair vorticity_current(const SpectralState& state);

ToyState toy_from_state(const SpectralState& state);
ToyState toy_evolve(const ToyState& initial, const ShearProfile& profile, double t);
/// (Û₁, Ĥ₁) of the toy model.
FieldPair toy_horizontal(const ToyState& state);

enum class InitialFamily { band_limited_random, single_mode, gaussian_bump };

struct InitialSpec {
    InitialFamily family = InitialFamily::band_limited_random;
    std::uint64_t seed = 1;
    int bandwidth = 1;          // random: modes |k| ≤ bandwidth
    double decay_power = 4.0;   // random: coefficient scale (1 + k²)^{-decay_power/2}
    int mode = 1;               // single_mode wavenumber
    double center = 0.0;        // gaussian_bump center
    double width = 0.5;         // gaussian_bump width
    double phi_scale = 1.0;     // φ̂₀ = phi_scale · (shape) for deterministic families
    bool vanish_at_critical = false;
};

InitialFamily parse_initial_family(std::string_view name);
std::string_view initial_family_name(InitialFamily f) noexcept;

/// Builds (ψ̂₀, φ̂₀); vanishing variants are multiplied by Π sin²((y − y_i)/2) over critical points of Z±.
SpectralState make_initial(const InitialSpec& spec, const ElsasserPair& pair, int alpha);

}  // namespace mhdlab
