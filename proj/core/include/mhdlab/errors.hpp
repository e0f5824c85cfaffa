#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mhdlab {

/// Every failure the library reports. The CLI maps each kind to its exit code.
enum class ErrorKind {
    invalid_argument,
    stability_violation,
    degenerate_field,
    range_overlap,
    degenerate_critical,
    under_resolved_profile,
    zero_wavenumber,
    grid_mismatch,
    non_finite_field,
    step_too_large,
    near_singular,
    series_diverging,
    singular_determinant,
    window_invalid,
    branch_cut_violation,
    fit_unstable,
    not_converging,
    epsilon_too_large,
    density_too_coarse,
    config_invalid,
    io_failure,
};

/// CamelCase name used in error JSON, e.g. "StabilityViolation".
std::string_view error_name(ErrorKind kind) noexcept;

/// Process exit code for a kind; 0 is never returned.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what)
{
    if (!ok) fail(kind, what);
}

}  // namespace mhdlab
