#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mhdlab/evolution.hpp"
#include "mhdlab/profiles.hpp"

namespace mhdlab {

struct NormSeries {
    std::string label;
    std::vector<double> times, values;
    std::uint64_t config_hash = 0;

    /// Appends (t, v); InvalidArgument unless t increases strictly and v is finite.
    void push(double t, double v);
    std::size_t size() const noexcept { return times.size(); }
};

/// ‖(Û₂, Ĥ₂)(t)‖_{L²} per snapshot.
NormSeries vertical_norms(std::span<const SpectralState> traj);

/// ‖(ω̂, ĵ)(t)‖_{L²} per snapshot.
NormSeries vorticity_norms(std::span<const SpectralState> traj);

/// Running trapezoid value of ∫₀^t (‖(ψ̂, φ̂)‖² + ‖∂_t(ψ̂, φ̂)‖²) with ∂_t from the generator.
struct SpacetimeSeries {
    NormSeries running;
    double initial_h3_sq = 0.0;  // ‖(ψ̂₀, φ̂₀)‖²_{H³}

    /// running(t1) − running(t0); both must be snapshot times.
    double increment(double t0, double t1) const;
    double ratio() const;  // final value over initial_h3_sq
};
SpacetimeSeries spacetime_accumulator(std::span<const SpectralState> traj, const ShearProfile& profile);

/// |Û₁| + |Ĥ₁| at each y by trigonometric interpolation, one series per point.
std::vector<NormSeries> depletion_trace(std::span<const SpectralState> traj, std::span<const double> points);

/// Toy-model |Û₁| + |Ĥ₁| at each point, evaluated at the given times.
std::vector<NormSeries> toy_depletion_trace(const ToyState& initial, const ShearProfile& profile,
                                            std::span<const double> times, std::span<const double> points);

/// ‖∂_x U₁‖_{H⁻¹_y} = |α|·‖Û₁‖_{H⁻¹} of the toy model over the given times.
NormSeries toy_mixing_series(const ToyState& initial, const ShearProfile& profile, std::span<const double> times);

/// ‖(∂_x U₁, ∂_x H₁)‖_{H⁻¹} / ‖(U₂, H₂)‖_{L²} for one state.
double mixing_equivalence_ratio(const SpectralState& state);

/// E_k = α^{2k}(‖Û₁‖² + ‖Û₂‖² + ‖Ĥ₂‖² + ‖Ĥ₁ − i(αb)⁻¹b′Ĥ₂‖²).
double energy_functional(const SpectralState& state, const ShearProfile& profile, int k);

enum class GrowthModel { power, power_envelope, linear_envelope };
GrowthModel parse_growth_model(std::string_view name);
std::string_view growth_model_name(GrowthModel m) noexcept;

struct GrowthFit {
    GrowthModel model = GrowthModel::power;
    double value = 0.0;     // exponent (power models) or slope (linear)
    double residual = 0.0;  // RMS in log space (power) or relative RMS (linear)
};

/// Running max over trailing windows of `window` samples; the first window − 1 samples are dropped.
NormSeries running_max_envelope(const NormSeries& s, std::size_t window = 10);

/// Least-squares fit on ≥ 10 samples; power models need t_max ≥ 10 t_min > 0. FitUnstable if residual > 0.1.
GrowthFit growth_fit(const NormSeries& series, GrowthModel model);

/// max over [late_lo, late_hi] divided by max over [early_lo, early_hi] (closed windows).
double windowed_max_ratio(const NormSeries& s, double early_lo, double early_hi, double late_lo, double late_hi);

}  // namespace mhdlab
