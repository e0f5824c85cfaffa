#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mhdlab/dunford.hpp"
#include "mhdlab/evolution.hpp"
#include "mhdlab/profiles.hpp"

namespace mhdlab::app {

struct TimeSpec {
    double T = 200.0;
    double dt = 0.05;
    int sample_every = 1;
};

struct ScanSpec {
    // resolvent-scan: c = re + i·im over the product grid
    double re_min = -1.3, re_max = 1.3;
    int re_count = 27;
    std::vector<double> im_values{0.3, 0.1, 0.05, -0.05, -0.1, -0.3};
    // depletion-scan
    std::vector<double> eps_list{1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3, 1e-3,
                                 3.1622776601683794e-4, 1e-4};
    std::vector<int> grid_sizes{256, 256, 512, 512, 1024, 2048, 2048};
    double control_offset = 0.7853981633974483;  // control point y₀ + π/4
    // dunford
    double contour_eps = 0.1;
    int contour_nodes = 64;
    std::vector<double> dunford_times{0.0, 2.0, 5.0};
    JumpOptions jump;
    // toy
    double toy_t_min = 20.0, toy_t_max = 2000.0;
    int toy_samples = 200;
};

struct Thresholds {
    double vertical_ratio = 0.3;
    double spacetime_ratio = 0.5;
    double depletion_ratio = 0.3;
    double toy_ratio = 0.95;
    double control_ratio = 0.5;
};

struct RunConfig {
    ProfileSpec u = ProfileSpec::sine(0.0, 0.1);
    ProfileSpec b = ProfileSpec::constant(1.0);
    int alpha = 1;
    std::size_t n = 256;
    InitialSpec initial;
    TimeSpec time;
    ScanSpec scan;
    Thresholds thresholds;

    /// Canonical TOML text; the config hash is taken over it.
    std::string canonical() const;
    std::uint64_t hash() const;
    std::string hash_hex() const;
};

/// Parses and range-checks a TOML document. ConfigInvalid on unknown sections/keys or bad values.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

/// MHDLAB_SEED, when set, replaces initial.seed.
void apply_environment(RunConfig& cfg);

/// Physics checks before any compute: Stern condition, dt bound, ε budget.
void validate(const RunConfig& cfg);

ShearProfile make_profile(const RunConfig& cfg);
ShearProfile make_profile(const RunConfig& cfg, std::size_t n);

std::uint64_t fnv1a(std::string_view text);

}  // namespace mhdlab::app
