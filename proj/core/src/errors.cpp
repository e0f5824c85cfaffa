#include "mhdlab/errors.hpp"

namespace mhdlab {

std::string_view error_name(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::stability_violation: return "StabilityViolation";
    case ErrorKind::degenerate_field: return "DegenerateField";
    case ErrorKind::range_overlap: return "RangeOverlap";
    case ErrorKind::degenerate_critical: return "DegenerateCritical";
    case ErrorKind::under_resolved_profile: return "UnderResolvedProfile";
    case ErrorKind::zero_wavenumber: return "ZeroWavenumber";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::non_finite_field: return "NonFiniteField";
    case ErrorKind::step_too_large: return "StepTooLarge";
    case ErrorKind::near_singular: return "NearSingular";
    case ErrorKind::series_diverging: return "SeriesDiverging";
    case ErrorKind::singular_determinant: return "SingularDeterminant";
    case ErrorKind::window_invalid: return "WindowInvalid";
    case ErrorKind::branch_cut_violation: return "BranchCutViolation";
    case ErrorKind::fit_unstable: return "FitUnstable";
    case ErrorKind::not_converging: return "NotConverging";
    case ErrorKind::epsilon_too_large: return "EpsilonTooLarge";
    case ErrorKind::density_too_coarse: return "DensityTooCoarse";
    case ErrorKind::config_invalid: return "ConfigInvalid";
    case ErrorKind::io_failure: return "IoFailure";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) noexcept
{
    // 1 is left to generic failures (unexpected exceptions), 2 to CLI usage errors.
    return 10 + static_cast<int>(kind);
}

}  // namespace mhdlab
