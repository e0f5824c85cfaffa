#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mhdlab/grid.hpp"

namespace mhdlab {

enum class ProfileFamily { constant, sine, cosine_sum, tanh_jet };

std::string_view family_name(ProfileFamily f) noexcept;
ProfileFamily parse_family(std::string_view name);

struct Mode {
    double amplitude = 0.0;
    int wavenumber = 1;
};

/// Value and first two derivatives at a point.
struct Jet {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};

/// Analytic periodic profile.
///   constant:   offset
///   sine:       offset + Σ a_m sin(k_m y)
///   cosine_sum: offset + Σ a_m cos(k_m y)
///   tanh_jet:   offset + a tanh(κ sin(k y)), with (a, k) = modes[0] and κ = steepness
struct ProfileSpec {
    ProfileFamily family = ProfileFamily::constant;
    double offset = 0.0;
    std::vector<Mode> modes;
    double steepness = 1.0;

    static ProfileSpec constant(double value);
    static ProfileSpec sine(double offset, double amplitude, int wavenumber = 1);
    static ProfileSpec cosine(double offset, double amplitude, int wavenumber = 1);
    static ProfileSpec tanh_jet(double offset, double amplitude, double steepness, int wavenumber = 1);

    Jet eval(double y) const;
    /// f(y0 + s) − f(y0) without cancellation for small s.
    double increment(double y0, double s) const;
    /// Throws InvalidArgument on non-finite parameters or a malformed tanh jet.
    void validate() const;
};

/// Equilibrium (u, b) sampled on a grid, keeping the analytic specs for off-grid evaluation.
struct ShearProfile {
    PeriodicGrid grid{PeriodicGrid::min_points};
    ProfileSpec u_spec, b_spec;
    std::vector<double> u, u_p, u_pp, b, b_p, b_pp;

    Jet u_at(double y) const { return u_spec.eval(y); }
    Jet b_at(double y) const { return b_spec.eval(y); }
    double max_abs_u() const;
    double min_b() const;
};

/// Samples the specs, checks b > 0 (DegenerateField) and b > |u| (StabilityViolation),
/// and checks the sampled derivatives against spectral differentiation (UnderResolvedProfile).
ShearProfile build_profile(const ProfileSpec& u, const ProfileSpec& b, PeriodicGrid grid);

/// Largest deviation between analytic and spectrally differentiated derivative samples.
double derivative_consistency(const ShearProfile& p);

enum class Side { plus, minus };
inline double side_sign(Side s) noexcept { return s == Side::plus ? 1.0 : -1.0; }
std::string_view side_name(Side s) noexcept;

/// Z± = u ± b with derivatives.
struct ElsasserPair {
    ShearProfile profile;
    std::vector<double> z_plus, z_minus, z_plus_p, z_minus_p, z_plus_pp, z_minus_pp;

    Jet z_at(Side s, double y) const;
    double z_increment(Side s, double y0, double h) const;
    const std::vector<double>& z(Side s) const { return s == Side::plus ? z_plus : z_minus; }
    double range_min(Side s) const;
    double range_max(Side s) const;
};

ElsasserPair elsasser(const ShearProfile& profile);

struct CriticalPoint {
    double y0 = 0.0;
    Side side = Side::plus;
    double z_pp = 0.0;
    double z_value = 0.0;
};

struct CriticalPointSet {
    std::vector<CriticalPoint> points;  // sorted by y0, then side
    bool flat_plus = false;             // Z₊′ ≡ 0: no isolated critical points exist
    bool flat_minus = false;

    std::vector<CriticalPoint> on_side(Side s) const;
};

/// Brackets sign changes of Z′± on a dense sampling and Newton-polishes each root.
/// Throws DegenerateCritical for |Z″(y0)| < 1e-6.
CriticalPointSet find_critical_points(const ElsasserPair& pair);

}  // namespace mhdlab
