#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/evolution.hpp"

namespace mhdlab::app {

using json = nlohmann::ordered_json;

/// %.17g, so that reruns are byte-identical and values round-trip.
std::string fmt(double v);

/// t, y, re_psi, im_psi, re_phi, im_phi; one row per grid point per snapshot.
void write_snapshots_csv(const std::filesystem::path& path, std::span<const SpectralState> traj,
                         const std::string& hash);
/// t, value, label.
void write_series_csv(const std::filesystem::path& path, std::span<const NormSeries> series, const std::string& hash);
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mhdlab::app
